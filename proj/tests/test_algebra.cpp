#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cmzv/binom.hpp"
#include "cmzv/field.hpp"
#include "cmzv/poly.hpp"
#include "cmzv/ratfunc.hpp"

using namespace cmzv;

namespace {

UniPoly random_poly(const FqCtx& F, Var v, int maxdeg, std::mt19937& rng) {
  std::uniform_int_distribution<int> dd(-1, maxdeg), dc(0, F.q() - 1);
  int d = dd(rng);
  std::vector<uint16_t> c;
  for (int i = 0; i <= d; ++i) c.push_back(uint16_t(dc(rng)));
  return UniPoly(F, v, std::move(c));
}

UniPoly random_nonzero_poly(const FqCtx& F, Var v, int maxdeg, std::mt19937& rng) {
  for (;;) {
    UniPoly f = random_poly(F, v, maxdeg, rng);
    if (!f.is_zero()) return f;
  }
}

BiPoly random_bipoly(const FqCtx& F, int maxdt, int maxdth, std::mt19937& rng) {
  std::uniform_int_distribution<int> dd(-1, maxdt);
  int d = dd(rng);
  std::vector<UniPoly> c;
  for (int i = 0; i <= d; ++i) c.push_back(random_poly(F, Var::theta, maxdth, rng));
  return BiPoly(F, std::move(c));
}

// Oracle: plain schoolbook product, no splitting.
UniPoly mul_oracle(const UniPoly& a, const UniPoly& b) {
  const FqCtx& F = a.field();
  if (a.is_zero() || b.is_zero()) return UniPoly::zero(F, a.var());
  std::vector<uint16_t> out(size_t(a.deg() + b.deg()) + 1, 0);
  for (int i = 0; i <= a.deg(); ++i)
    for (int j = 0; j <= b.deg(); ++j)
      out[size_t(i + j)] = F.add(out[size_t(i + j)], F.mul(a.coeff(i), b.coeff(j)));
  return UniPoly(F, a.var(), std::move(out));
}

// Oracle: Pascal triangle mod p, no Lucas.
int binom_oracle(int n, int k, int p) {
  if (k < 0 || k > n) return 0;
  std::vector<std::vector<int>> c(size_t(n) + 1);
  for (int i = 0; i <= n; ++i) {
    c[size_t(i)].assign(size_t(i) + 1, 1);
    for (int j = 1; j < i; ++j)
      c[size_t(i)][size_t(j)] = (c[size_t(i - 1)][size_t(j - 1)] + c[size_t(i - 1)][size_t(j)]) % p;
  }
  return c[size_t(n)][size_t(k)];
}

}  // namespace

TEST_CASE("field axioms hold in every built-in context") {
  for (int q : {2, 3, 4, 5, 8, 9}) {
    const FqCtx& F = FqCtx::builtin(q);
    CHECK(F.q() == q);
    for (int a = 0; a < q; ++a) {
      CHECK(F.add(uint16_t(a), 0) == a);
      CHECK(F.mul(uint16_t(a), 1) == a);
      CHECK(F.add(uint16_t(a), F.neg(uint16_t(a))) == 0);
      if (a != 0) {
        CHECK(F.mul(uint16_t(a), F.inv(uint16_t(a))) == 1);
        CHECK(F.pow(uint16_t(a), q - 1) == 1);
      }
      for (int b = 0; b < q; ++b) {
        CHECK(F.add(uint16_t(a), uint16_t(b)) == F.add(uint16_t(b), uint16_t(a)));
        CHECK(F.mul(uint16_t(a), uint16_t(b)) == F.mul(uint16_t(b), uint16_t(a)));
        for (int c = 0; c < q; ++c) {
          CHECK(F.mul(uint16_t(a), F.add(uint16_t(b), uint16_t(c))) ==
                F.add(F.mul(uint16_t(a), uint16_t(b)), F.mul(uint16_t(a), uint16_t(c))));
        }
      }
    }
  }
}

TEST_CASE("Frobenius p-power is additive and fixes F_q under q-power") {
  for (int q : {4, 8, 9}) {
    const FqCtx& F = FqCtx::builtin(q);
    for (int a = 0; a < q; ++a) {
      CHECK(F.frob_p(uint16_t(a)) == F.pow(uint16_t(a), F.p()));
      // x^q = x
      uint16_t x = uint16_t(a);
      for (int i = 0; i < F.e(); ++i) x = F.frob_p(x);
      CHECK(x == a);
      for (int b = 0; b < q; ++b)
        CHECK(F.frob_p(F.add(uint16_t(a), uint16_t(b))) ==
              F.add(F.frob_p(uint16_t(a)), F.frob_p(uint16_t(b))));
    }
  }
}

TEST_CASE("reducible moduli are rejected with a witness") {
  std::string w;
  CHECK(!fp_poly_irreducible(2, {1, 0, 1}, &w));  // x^2 + 1 = (x+1)^2 mod 2
  CHECK(!w.empty());
  CHECK(fp_poly_irreducible(2, {1, 1, 1}, &w));
  CHECK(fp_poly_irreducible(3, {1, 0, 1}, &w));
  CHECK_THROWS(FqCtx(2, 2, {1, 0, 1}));
  CHECK_THROWS(FqCtx(4, 1, {0, 1}));  // characteristic must be prime
}

TEST_CASE("Lucas binomials match the Pascal oracle") {
  for (int p : {2, 3, 5}) {
    for (int n = 0; n <= 40; ++n)
      for (int k = 0; k <= n; ++k) CHECK(binom_mod_p(n, k, p) == binom_oracle(n, k, p));
  }
  // digit rule spot checks across a power-of-p boundary
  CHECK(binom_mod_p(1024, 512, 2) == 0);
  CHECK(binom_mod_p(1025, 1, 2) == 1);
}

TEST_CASE("polynomial product agrees with the schoolbook oracle across the split threshold") {
  std::mt19937 rng(7);
  for (int q : {2, 3, 9}) {
    const FqCtx& F = FqCtx::builtin(q);
    for (int round = 0; round < 12; ++round) {
      int d = (round < 8) ? 30 : 300;  // exercise the Karatsuba path too
      UniPoly a = random_poly(F, Var::theta, d, rng);
      UniPoly b = random_poly(F, Var::theta, d, rng);
      CHECK(a * b == mul_oracle(a, b));
    }
  }
}

TEST_CASE("division, gcd and exact division satisfy their defining identities") {
  std::mt19937 rng(11);
  for (int q : {2, 3, 5}) {
    const FqCtx& F = FqCtx::builtin(q);
    for (int round = 0; round < 50; ++round) {
      UniPoly a = random_poly(F, Var::theta, 18, rng);
      UniPoly b = random_nonzero_poly(F, Var::theta, 9, rng);
      UniPoly quo(F, Var::theta), rem(F, Var::theta);
      a.divrem(b, quo, rem);
      CHECK(quo * b + rem == a);
      CHECK(rem.deg() < b.deg());
      UniPoly g = UniPoly::gcd(a, b);
      if (!a.is_zero()) {
        CHECK((a % g).is_zero());
        CHECK((b % g).is_zero());
        CHECK(g.leading() == 1);
      }
      CHECK((a * b).exact_div(b) == a);
    }
  }
}

TEST_CASE("Frobenius twist is the q^n-th power and is multiplicative") {
  std::mt19937 rng(13);
  for (int q : {2, 3, 4}) {
    const FqCtx& F = FqCtx::builtin(q);
    for (int round = 0; round < 20; ++round) {
      UniPoly f = random_poly(F, Var::theta, 6, rng);
      UniPoly g = random_poly(F, Var::theta, 6, rng);
      CHECK(f.twist(1) == f.pow(q));
      CHECK(f.twist(2) == f.pow((long long)q * q));
      CHECK((f * g).twist(1) == f.twist(1) * g.twist(1));
      CHECK((f + g).twist(1) == f.twist(1) + g.twist(1));
    }
  }
}

TEST_CASE("bivariate arithmetic, twist and t = theta specialization") {
  std::mt19937 rng(17);
  for (int q : {2, 3}) {
    const FqCtx& F = FqCtx::builtin(q);
    for (int round = 0; round < 20; ++round) {
      BiPoly a = random_bipoly(F, 4, 4, rng);
      BiPoly b = random_bipoly(F, 4, 4, rng);
      CHECK((a * b).eval_t_theta() == a.eval_t_theta() * b.eval_t_theta());
      CHECK((a + b).eval_t_theta() == a.eval_t_theta() + b.eval_t_theta());
      CHECK((a * b).twist(1) == a.twist(1) * b.twist(1));
      if (!b.is_zero()) {
        UniPoly den = random_nonzero_poly(F, Var::t, 3, rng);
        BiPoly prod = a * BiPoly::from_t(den);
        CHECK(prod.exact_div_t(den) == a);
      }
    }
  }
}

TEST_CASE("hyperderivatives compose with binomial factors and satisfy the product rule") {
  std::mt19937 rng(19);
  for (int q : {2, 3}) {
    const FqCtx& F = FqCtx::builtin(q);
    for (int round = 0; round < 15; ++round) {
      BiPoly f = random_bipoly(F, 6, 3, rng);
      BiPoly g = random_bipoly(F, 6, 3, rng);
      for (int n = 0; n <= 4; ++n) {
        // product rule
        BiPoly lhs = (f * g).hyperderivative(n);
        BiPoly rhs(F);
        for (int j = 0; j <= n; ++j)
          rhs = rhs + f.hyperderivative(j) * g.hyperderivative(n - j);
        CHECK(lhs == rhs);
        for (int m = 0; m + n <= 5; ++m) {
          // composition: d^n d^m = C(n+m, n) d^(n+m)
          BiPoly two = f.hyperderivative(m).hyperderivative(n);
          BiPoly one = f.hyperderivative(n + m).scaled(binom_fq(F, n + m, n));
          CHECK(two == one);
        }
      }
    }
  }
}

TEST_CASE("rational functions stay canonical and form a field") {
  std::mt19937 rng(23);
  for (int q : {2, 3, 9}) {
    const FqCtx& F = FqCtx::builtin(q);
    for (int round = 0; round < 40; ++round) {
      RatFunc a(random_poly(F, Var::theta, 6, rng), random_nonzero_poly(F, Var::theta, 5, rng));
      RatFunc b(random_poly(F, Var::theta, 6, rng), random_nonzero_poly(F, Var::theta, 5, rng));
      RatFunc c(random_poly(F, Var::theta, 4, rng), random_nonzero_poly(F, Var::theta, 4, rng));
      CHECK(a.den().leading() == 1);
      CHECK(UniPoly::gcd(a.num(), a.den()).is_one());
      CHECK(a + b == b + a);
      CHECK((a + b) + c == a + (b + c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a - a == RatFunc::zero(F, Var::theta));
      if (!a.is_zero()) {
        CHECK(a * a.inv() == RatFunc::one(F, Var::theta));
        CHECK(a.pow(-2) == (a * a).inv());
        // ord at infinity is additive
        if (!b.is_zero()) CHECK((a * b).ord_inf() == a.ord_inf() + b.ord_inf());
        CHECK(a.twist(1) == a.pow(q));
      }
    }
  }
}
