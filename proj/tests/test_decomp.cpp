#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "cmzv/decomp.hpp"

using namespace cmzv;

namespace {

RatFunc theta_pow(const FqCtx& F, long long n) {
  return RatFunc(UniPoly::monomial(F, Var::theta, 1, n));
}

UniPoly tmono(const FqCtx& F, uint16_t c, long long k) {
  return UniPoly::monomial(F, Var::t, c, k);
}

// b(t) as an exact jet at t = theta
Jet<LaurentNumber> bjet(const UniPoly& b, int len) {
  const FqCtx& F = b.field();
  Jet<RatFunc> jr = jet_from_bipoly(BiPoly::from_t(b), len);
  std::vector<LaurentNumber> c;
  for (int a = 0; a < len; ++a)
    c.push_back(jr.coeff(a).is_zero()
                    ? LaurentNumber::exact_zero(F)
                    : LaurentNumber::from_unipoly(jr.coeff(a).num()));
  return Jet<LaurentNumber>(std::move(c));
}

}  // namespace

TEST_CASE("coefficient expansion of the interpolation polynomials") {
  const FqCtx& F = FqCtx::builtin(2);
  SpecialCache SC(F);
  CoeffExpansion ex = expand_coefficients(SC, Index({1, 3}));
  CHECK(ex.degree == std::vector<int>{0, 1});
  REQUIRE(ex.terms.size() == 2);
  CHECK(ex.terms[0].j == std::vector<int>{0, 0});
  CHECK(ex.terms[0].u == PointTuple({RatFunc::one(F, Var::theta), theta_pow(F, 2)}));
  CHECK(ex.terms[0].tdeg == 0);
  CHECK(ex.terms[1].j == std::vector<int>{0, 1});
  CHECK(ex.terms[1].u == PointTuple::ones(F, 2));
  CHECK(ex.terms[1].tdeg == 1);

  CoeffExpansion triv = expand_coefficients(SC, Index({1, 1}));
  REQUIRE(triv.terms.size() == 1);
  CHECK(triv.terms[0].u == PointTuple::ones(F, 2));

  const FqCtx& F3 = FqCtx::builtin(3);
  SpecialCache SC3(F3);
  CoeffExpansion e3 = expand_coefficients(SC3, Index({2}));
  REQUIRE(e3.terms.size() == 1);
  CHECK(e3.terms[0].u == PointTuple::ones(F3, 1));
  CHECK(e3.terms[0].tdeg == 0);

  // product-set size matches the degree bounds
  CoeffExpansion e4 = expand_coefficients(SC3, Index({4, 1}));
  size_t expect = 1;
  for (int d : e4.degree) expect *= size_t(d) + 1;
  CHECK(e4.terms.size() == expect);
}

TEST_CASE("star conversion by consecutive block merges") {
  const FqCtx& F = FqCtx::builtin(3);
  RatFunc th = theta_pow(F, 1);
  RatFunc one = RatFunc::one(F, Var::theta);

  std::vector<StarTerm> d1 = star_convert(Index({3}), PointTuple({th}));
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].s == Index({3}));
  CHECK(d1[0].sign == 1);

  std::vector<StarTerm> d2 = star_convert(Index({1, 2}), PointTuple({th, one}));
  REQUIRE(d2.size() == 2);
  CHECK(d2[0].s == Index({1, 2}));
  CHECK(d2[0].u == PointTuple({th, one}));
  CHECK(d2[0].sign == 1);
  CHECK(d2[1].s == Index({3}));
  CHECK(d2[1].u == PointTuple({th}));
  CHECK(d2[1].sign == F.sign(1));

  std::vector<StarTerm> d3 =
      star_convert(Index({1, 1, 2}), PointTuple({one, th, one}));
  REQUIRE(d3.size() == 4);
  int merged = 0;
  for (const StarTerm& st : d3) {
    CHECK(st.s.weight() == 4);
    CHECK(st.sign == F.sign(3 - st.s.depth()));
    if (st.s.depth() < 3) ++merged;
  }
  CHECK(merged == 3);

  // numeric inclusion-exclusion oracle at a few precisions
  PolylogCache pc(F);
  for (const auto& pr : {std::make_pair(Index({1, 2}), PointTuple({th, one})),
                         std::make_pair(Index({1, 1, 2}),
                                        PointTuple({one, th, one}))}) {
    const long long P = 40;
    PolylogJet strict = cmpl_jet(pc, pr.first, pr.second, 2, P);
    Jet<LaurentNumber> rhs =
        Jet<LaurentNumber>::zero(LaurentNumber::zero_to(F, P + 10), 2);
    for (const StarTerm& st : star_convert(pr.first, pr.second))
      rhs = rhs + cmspl_jet(pc, st.s, st.u, 2, P).value.scaled(st.sign);
    CHECK(agrees_through(strict.value.coeff(0), rhs.coeff(0), P));
    CHECK(agrees_through(strict.value.coeff(1), rhs.coeff(1), P));
  }
}

TEST_CASE("deformed zeta series specializes to gamma times zeta") {
  for (int q : {2, 3}) {
    const FqCtx& F = FqCtx::builtin(q);
    SpecialCache SC(F);
    PolylogCache pc(F);
    const long long P = 60;
    // depth one, s = 1: H_0 = 1 and Gamma_1 = 1
    ZetaSeriesJet z1 = zeta_series_jet(SC, pc, Index({1}), 1, P);
    CHECK(z1.tail_ord >= P + 10);
    LaurentNumber zb =
        zeta_bruteforce(SC, Index({1}), zeta_degree_cutoff(SC, Index({1}), P), P);
    CHECK(agrees_through(z1.value.coeff(0), zb, P));
  }
  const FqCtx& F = FqCtx::builtin(2);
  SpecialCache SC(F);
  PolylogCache pc(F);
  const long long P = 60;
  Index s({1, 3});
  ZetaSeriesJet zs = zeta_series_jet(SC, pc, s, 2, P);
  UniPoly g = SC.gamma_index(s);
  long long pz = P + g.deg() + 5;
  LaurentNumber zb = zeta_bruteforce(SC, s, zeta_degree_cutoff(SC, s, pz), pz);
  CHECK(agrees_through(zs.value.coeff(0), LaurentNumber::from_unipoly(g) * zb, P));
}

TEST_CASE("deformed zeta series equals its coefficient expansion") {
  // sum over the expansion of a_j(t) times the strict chain sum
  struct Case {
    int q;
    Index s;
    int order;
  };
  for (const Case& c : {Case{2, Index({1, 3}), 4}, Case{3, Index({4}), 3},
                        Case{2, Index({2, 1}), 3}}) {
    const FqCtx& F = FqCtx::builtin(c.q);
    SpecialCache SC(F);
    PolylogCache pc(F);
    const long long P = 50;
    ZetaSeriesJet zs = zeta_series_jet(SC, pc, c.s, c.order, P);
    Jet<LaurentNumber> rhs = Jet<LaurentNumber>::zero(
        LaurentNumber::zero_to(F, P + 10), c.order);
    for (const CoeffTerm& ct : expand_coefficients(SC, c.s).terms) {
      if (ct.u.has_zero()) continue;
      PolylogJet pj = cmpl_jet(pc, c.s, ct.u, c.order, P);
      rhs = rhs + bjet(tmono(F, 1, ct.tdeg), c.order) * pj.value;
    }
    for (int k = 0; k < c.order; ++k)
      CHECK(agrees_through(zs.value.coeff(k), rhs.coeff(k), P));
  }
}

TEST_CASE("decomposition triples") {
  const FqCtx& F = FqCtx::builtin(2);
  SpecialCache SC(F);
  PolylogCache pc(F);
  Decomposition d = decompose(SC, pc, Index({1, 3}), 60);
  CHECK(d.split == 2);
  REQUIRE(d.triples.size() == 4);
  CHECK(d.triples[0].b == UniPoly::one(F, Var::t));
  CHECK(d.triples[0].s == Index({4}));
  CHECK(d.triples[0].u == PointTuple({theta_pow(F, 2)}));
  CHECK(d.triples[1].b == tmono(F, 1, 1));
  CHECK(d.triples[1].s == Index({4}));
  CHECK(d.triples[1].u == PointTuple::ones(F, 1));
  CHECK(d.triples[2].b == UniPoly::one(F, Var::t));
  CHECK(d.triples[2].s == Index({1, 3}));
  CHECK(d.triples[2].u == PointTuple({RatFunc::one(F, Var::theta), theta_pow(F, 2)}));
  CHECK(d.triples[3].b == tmono(F, 1, 1));
  CHECK(d.triples[3].s == Index({1, 3}));
  CHECK(d.triples[3].u == PointTuple::ones(F, 2));

  // depth one is the coefficient expansion itself
  const FqCtx& F3 = FqCtx::builtin(3);
  SpecialCache SC3(F3);
  PolylogCache pc3(F3);
  Decomposition d1 = decompose(SC3, pc3, Index({2}), 50);
  CHECK(d1.split == 1);
  REQUIRE(d1.triples.size() == 1);
  CHECK(d1.triples[0].b == UniPoly::one(F3, Var::t));
  CHECK(d1.triples[0].u == PointTuple::ones(F3, 1));

  // depth two over F3: the global sign is visible in b
  Decomposition d2 = decompose(SC3, pc3, Index({1, 1}), 50);
  CHECK(d2.split == 1);
  REQUIRE(d2.triples.size() == 2);
  CHECK(d2.triples[0].b == UniPoly(F3, Var::t, {2}));
  CHECK(d2.triples[0].s == Index({2}));
  CHECK(d2.triples[1].b == UniPoly(F3, Var::t, {2}));
  CHECK(d2.triples[1].s == Index({1, 1}));
}

TEST_CASE("decomposition invariants across small indexes") {
  struct Case {
    int q;
    Index s;
  };
  for (const Case& c :
       {Case{2, Index({1, 1})}, Case{2, Index({2, 2})}, Case{2, Index({1, 1, 1})},
        Case{3, Index({1, 2})}, Case{3, Index({2, 1})}}) {
    const FqCtx& F = FqCtx::builtin(c.q);
    SpecialCache SC(F);
    PolylogCache pc(F);
    Decomposition d = decompose(SC, pc, c.s, 45);  // internal checks are hard
    CHECK(d.split >= 1);
    CHECK(d.triples.size() >= size_t(d.split));
    for (int i = 0; i < d.split; ++i) CHECK(d.triples[size_t(i)].s.depth() == 1);
    for (const Triple& tr : d.triples) {
      CHECK(tr.s.weight() == c.s.weight());
      CHECK(tr.s.depth() <= c.s.depth());
      CHECK(!tr.b.is_zero());
      CHECK(!tr.u.has_zero());
    }
  }
}

TEST_CASE("depth one zeta products") {
  const FqCtx& F3 = FqCtx::builtin(3);
  ZetaProduct zp = zeta_product(F3, 1, 2);
  CHECK(!zp.boundary_dropped);
  REQUIRE(zp.terms.size() == 3);
  CHECK(zp.terms[0] == std::make_pair(uint16_t(1), Index({1, 2})));
  CHECK(zp.terms[1] == std::make_pair(uint16_t(1), Index({2, 1})));
  CHECK(zp.terms[2] == std::make_pair(uint16_t(1), Index({3})));

  const FqCtx& F2 = FqCtx::builtin(2);
  // squares collapse in characteristic 2
  ZetaProduct sq = zeta_product(F2, 1, 1);
  REQUIRE(sq.terms.size() == 1);
  CHECK(sq.terms[0] == std::make_pair(uint16_t(1), Index({2})));
  CHECK(!sq.boundary_dropped);

  // the excluded boundary term is reported
  ZetaProduct bd = zeta_product(F2, 1, 2);
  CHECK(bd.boundary_dropped);
  REQUIRE(bd.terms.size() == 2);
  CHECK(bd.terms[0] == std::make_pair(uint16_t(1), Index({1, 2})));
  CHECK(bd.terms[1] == std::make_pair(uint16_t(1), Index({3})));

  // the depth-two terms cancel against the sum part in characteristic 2
  ZetaProduct big = zeta_product(F2, 2, 3);
  REQUIRE(big.terms.size() == 1);
  CHECK(big.terms[0] == std::make_pair(uint16_t(1), Index({5})));
  CHECK(!big.boundary_dropped);

  ZetaProduct b3 = zeta_product(F3, 2, 3);
  REQUIRE(b3.terms.size() == 2);
  CHECK(b3.terms[0] == std::make_pair(uint16_t(1), Index({2, 3})));
  CHECK(b3.terms[1] == std::make_pair(uint16_t(1), Index({5})));
}

TEST_CASE("zeta products hold numerically") {
  for (int q : {2, 3}) {
    const FqCtx& F = FqCtx::builtin(q);
    SpecialCache SC(F);
    const long long P = 45;
    for (int s1 = 1; s1 <= 3; ++s1)
      for (int s2 = s1; s1 + s2 <= 6; ++s2) {
        ZetaProduct zp = zeta_product(F, s1, s2);
        LaurentNumber lhs =
            zeta_bruteforce(SC, Index({s1}),
                            zeta_degree_cutoff(SC, Index({s1}), P), P) *
            zeta_bruteforce(SC, Index({s2}),
                            zeta_degree_cutoff(SC, Index({s2}), P), P);
        LaurentNumber rhs = LaurentNumber::zero_to(F, P);
        for (const auto& p : zp.terms) {
          LaurentNumber z = zeta_bruteforce(
              SC, p.second, zeta_degree_cutoff(SC, p.second, P), P);
          rhs = rhs + z.scaled(p.first);
        }
        CHECK(agreement_prec(lhs, rhs) >= P - 10);
      }
  }
}
