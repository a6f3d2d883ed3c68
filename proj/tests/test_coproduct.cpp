#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "cmzv/coproduct.hpp"

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

TEST_CASE("gluing keeps one Carlitz block and stacks the lower blocks") {
  const FqCtx& F = FqCtx::builtin(2);
  SpecialCache SC(F);
  PolylogCache PC(F);
  RatFunc z = RatFunc::zero(F, Var::theta);
  RatFunc one = RatFunc::one(F, Var::theta);

  CoproductModule cop = build_coproduct(F, decompose(SC, PC, Index({1, 3}), 50));
  CHECK(cop.top == 4);
  CHECK(cop.glued.dim() == 6);
  CHECK(cop.glued.blocks() == std::vector<int>{4, 1, 1});
  CHECK(cop.minus_off == std::vector<int>{-1, -1, 4, 5});
  REQUIRE(cop.parts.size() == 4);
  CHECK(cop.parts[0].dim() == 4);
  CHECK(cop.parts[2].dim() == 5);

  // the full glued t-action, with -1 = 1 in characteristic 2
  Mat<RatFunc> d0(6, 6, z);
  for (int i = 0; i < 6; ++i) d0.at(i, i) = theta_pow(F, 1);
  for (int i = 0; i < 3; ++i) d0.at(i, i + 1) = one;
  Mat<RatFunc> e1(6, 6, z);
  e1.at(3, 0) = one;
  e1.at(3, 4) = theta_pow(F, 2);
  e1.at(3, 5) = one;
  e1.at(4, 4) = one;
  e1.at(5, 5) = one;
  TwistedMatrix expect(F, 6, 6);
  expect.add_term(d0, 0);
  expect.add_term(e1, 1);
  CHECK(cop.glued.rho_t() == expect);

  // depth-one-only decompositions glue to the bare Carlitz power
  const FqCtx& F3 = FqCtx::builtin(3);
  SpecialCache SC3(F3);
  PolylogCache PC3(F3);
  CoproductModule c2 = build_coproduct(F3, decompose(SC3, PC3, Index({2}), 50));
  CHECK(c2.glued.dim() == 2);
  CHECK(c2.glued.blocks() == std::vector<int>{2});
  CHECK(c2.glued.rho_t() == carlitz_tensor(F3, 2).rho_t());
  CHECK(c2.minus_off == std::vector<int>{-1});

  // shared block dimension must match every part
  TModule c4 = carlitz_tensor(F, 4);
  CHECK_THROWS_AS(glue_over_carlitz(F, 3, {&c4}), std::invalid_argument);

  // a part may not couple its lower block into the shared rows
  Mat<RatFunc> bd(2, 2, z);
  bd.at(0, 0) = theta_pow(F, 1);
  bd.at(1, 1) = theta_pow(F, 1);
  Mat<RatFunc> be(2, 2, z);
  be.at(0, 0) = one;
  be.at(1, 0) = one;
  be.at(1, 1) = one;
  TwistedMatrix br(F, 2, 2);
  br.add_term(bd, 0);
  br.add_term(be, 1);
  TModule bad(F, std::vector<int>{1, 1}, std::move(br));
  CHECK_THROWS_AS(glue_over_carlitz(F, 1, {&bad}), std::invalid_argument);
}

TEST_CASE("the assembly projection is a morphism of t-modules") {
  const FqCtx& F = FqCtx::builtin(2);
  SpecialCache SC(F);
  PolylogCache PC(F);
  RatFunc z = RatFunc::zero(F, Var::theta);
  RatFunc one = RatFunc::one(F, Var::theta);
  RatFunc th = theta_pow(F, 1);

  CoproductModule cop = build_coproduct(F, decompose(SC, PC, Index({1, 3}), 50));
  const int w = cop.top;
  int total = 0;
  int kmax = 0;
  for (const TModule& p : cop.parts) {
    total += p.dim();
    kmax = std::max(kmax, p.rho_t().tau_degree());
  }

  TwistedMatrix bdiag(F, total, total);
  for (int k = 0; k <= kmax; ++k) {
    Mat<RatFunc> big(total, total, z);
    int off = 0;
    for (const TModule& p : cop.parts) {
      Mat<RatFunc> mk = p.rho_t().coeff(k);
      for (int i = 0; i < p.dim(); ++i)
        for (int j = 0; j < p.dim(); ++j) big.at(off + i, off + j) = mk.at(i, j);
      off += p.dim();
    }
    bdiag.add_term(big, k);
  }

  Mat<RatFunc> proj(cop.glued.dim(), total, z);
  int off = 0;
  for (size_t l = 0; l < cop.parts.size(); ++l) {
    for (int i = 0; i < w; ++i) proj.at(i, off + i) = one;
    for (int i = w; i < cop.parts[l].dim(); ++i)
      proj.at(cop.minus_off[l] + i - w, off + i) = one;
    off += cop.parts[l].dim();
  }
  TwistedMatrix pm = TwistedMatrix::from_matrix(proj);
  CHECK(pm * bdiag == cop.glued.rho_t() * pm);

  // special point of the glued module
  std::vector<RatFunc> expect{z, z, z, one, one, th + one};
  CHECK(coproduct_point(cop) == expect);
}

TEST_CASE("log vector of the glued module at its special point") {
  const FqCtx& F = FqCtx::builtin(2);
  SpecialCache SC(F);
  PolylogCache PC(F);
  const long long P = 60;

  CoproductModule cop = build_coproduct(F, decompose(SC, PC, Index({1, 3}), 50));
  LogVectorReport rep = z_vector(cop, SC, PC, P);
  REQUIRE(rep.z.size() == 6);
  CHECK(rep.prec == P);
  CHECK(rep.labels ==
        std::vector<std::string>{"atseries-jet 3", "atseries-jet 2",
                                 "atseries-jet 1", "atseries-jet 0",
                                 "minus-block 3", "minus-block 4"});
  for (long long a : rep.agreement) CHECK(a >= P);
  for (size_t i = 0; i < rep.z.size(); ++i)
    CHECK(agreement_prec(rep.z[i], rep.closed[i]) >= P);

  // center coordinate carries the gamma-scaled double zeta value
  LaurentNumber gz =
      LaurentNumber::from_unipoly(SC.gamma_index(Index({1, 3}))) *
      zeta_bruteforce(SC, Index({1, 3}),
                      zeta_degree_cutoff(SC, Index({1, 3}), P + 8), P + 8);
  CHECK(agreement_prec(rep.z[3], gz) >= P);

  // jet coordinates above the center match the deformed zeta series
  ZetaSeriesJet zs = zeta_series_jet(SC, PC, Index({1, 3}), 4, P);
  for (int j = 0; j < 4; ++j)
    CHECK(agreement_prec(rep.z[size_t(j)], zs.value.coeff(3 - j)) >= P);

  // lower coordinates are the star polylog of the length-one prefix, the
  // second one scaled through the t-action polynomial t
  LaurentNumber li =
      cmspl_jet(PC, Index({1}), PointTuple::ones(F, 1), 1, P).value.coeff(0);
  CHECK(agreement_prec(rep.z[4], li) >= P);
  CHECK(agreement_prec(rep.z[5],
                       LaurentNumber::from_unipoly(
                           UniPoly::monomial(F, Var::theta, 1, 1)) *
                           li) >= P - 5);

  // the exponential returns the special point
  PointEval pe = exp_eval(cop.glued, rep.z, 40);
  std::vector<RatFunc> v = coproduct_point(cop);
  for (size_t i = 0; i < v.size(); ++i) {
    LaurentNumber target = v[i].is_zero()
                               ? LaurentNumber::zero_to(F, 45)
                               : LaurentNumber::from_unipoly(v[i].num());
    CHECK(agreement_prec(pe.value[i], target) >= 35);
  }
}

TEST_CASE("depth one log vectors carry the zeta jets alone") {
  const FqCtx& F = FqCtx::builtin(3);
  SpecialCache SC(F);
  PolylogCache PC(F);
  const long long P = 60;

  CoproductModule cop = build_coproduct(F, decompose(SC, PC, Index({2}), 50));
  LogVectorReport rep = z_vector(cop, SC, PC, P);
  REQUIRE(rep.z.size() == 2);
  CHECK(rep.labels ==
        std::vector<std::string>{"atseries-jet 1", "atseries-jet 0"});

  ZetaSeriesJet zs = zeta_series_jet(SC, PC, Index({2}), 2, P);
  CHECK(agreement_prec(rep.z[0], zs.value.coeff(1)) >= P);
  LaurentNumber gz =
      LaurentNumber::from_unipoly(SC.gamma_index(Index({2}))) *
      zeta_bruteforce(SC, Index({2}), zeta_degree_cutoff(SC, Index({2}), P + 8),
                      P + 8);
  CHECK(agreement_prec(rep.z[1], gz) >= P);
}

TEST_CASE("polynomial scaling acts on the log vector by jets") {
  const FqCtx& F = FqCtx::builtin(2);
  SpecialCache SC(F);
  PolylogCache PC(F);
  const long long P = 60;

  CoproductModule cop = build_coproduct(F, decompose(SC, PC, Index({1, 3}), 50));
  LogVectorReport rep = z_vector(cop, SC, PC, P);

  UniPoly c = tmono(F, 1, 1);
  Mat<RatFunc> m = d_rho(cop.glued, BiPoly::from_t(c));
  std::vector<LaurentNumber> mz;
  for (int i = 0; i < 6; ++i) {
    LaurentNumber acc = LaurentNumber::exact_zero(F);
    for (int j = 0; j < 6; ++j) {
      const RatFunc& e = m.at(i, j);
      if (e.is_zero()) continue;
      acc = acc + LaurentNumber::from_unipoly(e.num()) * rep.z[size_t(j)];
    }
    mz.push_back(acc);
  }

  // top block: descending jet coefficients of c times the zeta series
  ZetaSeriesJet zs = zeta_series_jet(SC, PC, Index({1, 3}), 4, P + 1);
  Jet<LaurentNumber> cz = bjet(c, 4) * zs.value;
  for (int j = 0; j < 4; ++j)
    CHECK(agreement_prec(mz[size_t(j)], cz.coeff(3 - j)) >= P - 5);

  // lower blocks: the branch scales become c b_l, here t and t^2
  LaurentNumber li =
      cmspl_jet(PC, Index({1}), PointTuple::ones(F, 1), 1, P).value.coeff(0);
  CHECK(agreement_prec(
            mz[4], LaurentNumber::from_unipoly(
                       UniPoly::monomial(F, Var::theta, 1, 1)) *
                       li) >= P - 5);
  CHECK(agreement_prec(
            mz[5], LaurentNumber::from_unipoly(
                       UniPoly::monomial(F, Var::theta, 1, 2)) *
                       li) >= P - 5);
}

TEST_CASE("monomials of two depth one zeta values") {
  const FqCtx& F = FqCtx::builtin(3);
  SpecialCache SC(F);
  PolylogCache PC(F);
  const long long P = 45;

  MonomialReport rep =
      monomial_module(SC, PC, {Index({1}), Index({2})}, P);
  CHECK(rep.expansion ==
        std::vector<std::pair<uint16_t, Index>>{
            {1, Index({1, 2})}, {1, Index({2, 1})}, {1, Index({3})}});
  REQUIRE(rep.glued.block_dim(1) == 3);
  CHECK(rep.z.labels[0] == "atseries-jet 2");
  CHECK(rep.z.labels[2] == "atseries-jet 0");
  // all complementary gamma factors are trivial here
  for (const UniPoly& c : rep.scale) CHECK(c == UniPoly::one(F, Var::t));

  // the distinguished coordinate carries the product of the factor values
  const long long pz = P + 10;
  LaurentNumber target =
      zeta_bruteforce(SC, Index({1}), zeta_degree_cutoff(SC, Index({1}), pz),
                      pz) *
      zeta_bruteforce(SC, Index({2}), zeta_degree_cutoff(SC, Index({2}), pz),
                      pz);
  CHECK(agreement_prec(rep.z.z[2], target) >= P - 5);
}

TEST_CASE("monomials with nontrivial gamma scaling") {
  const FqCtx& F = FqCtx::builtin(2);
  SpecialCache SC(F);
  PolylogCache PC(F);
  const long long P = 40;

  MonomialReport rep =
      monomial_module(SC, PC, {Index({1}), Index({3})}, P);
  CHECK(rep.expansion ==
        std::vector<std::pair<uint16_t, Index>>{
            {1, Index({1, 3})}, {1, Index({4})}, {1, Index({2, 2})}});
  REQUIRE(rep.glued.block_dim(1) == 4);

  // c_i = prod of the other gamma factors; here Gamma(1,3) = Gamma(4) =
  // theta^2 + theta and Gamma(2,2) = 1
  UniPoly g3 = SC.gamma_index(Index({1, 3}));
  CHECK(rep.scale[0] == (SC.gamma_index(Index({4})) *
                         SC.gamma_index(Index({2, 2}))).with_var(Var::t));
  CHECK(g3.deg() == 2);

  const long long pz = P + g3.deg() * 3 + 10;
  LaurentNumber target =
      LaurentNumber::from_unipoly(SC.gamma_index(Index({1, 3})) *
                                  SC.gamma_index(Index({4})) *
                                  SC.gamma_index(Index({2, 2}))) *
      zeta_bruteforce(SC, Index({1}), zeta_degree_cutoff(SC, Index({1}), pz),
                      pz) *
      zeta_bruteforce(SC, Index({3}), zeta_degree_cutoff(SC, Index({3}), pz),
                      pz);
  CHECK(agreement_prec(rep.z.z[3], target) >= P - 5);
}

TEST_CASE("single factor monomials degenerate to the plain log vector") {
  const FqCtx& F = FqCtx::builtin(3);
  SpecialCache SC(F);
  PolylogCache PC(F);
  const long long P = 50;

  MonomialReport rep = monomial_module(SC, PC, {Index({2})}, P);
  CHECK(rep.glued.dim() == 2);
  REQUIRE(rep.scale.size() == 1);
  CHECK(rep.scale[0] == UniPoly::one(F, Var::t));

  CoproductModule cop = build_coproduct(F, decompose(SC, PC, Index({2}), P));
  LogVectorReport direct = z_vector(cop, SC, PC, P);
  CHECK(rep.z.labels == direct.labels);
  for (size_t i = 0; i < direct.z.size(); ++i)
    CHECK(agreement_prec(rep.z.z[i], direct.z[i]) >= P);
}

TEST_CASE("like indexes collect in the product expansion") {
  const FqCtx& F = FqCtx::builtin(3);
  SpecialCache SC(F);
  PolylogCache PC(F);
  const long long P = 45;

  MonomialReport rep = monomial_module(SC, PC, {Index({1}), Index({1})}, P);
  CHECK(rep.expansion ==
        std::vector<std::pair<uint16_t, Index>>{{2, Index({1, 1})},
                                                {1, Index({2})}});
  const long long pz = P + 10;
  LaurentNumber z1 = zeta_bruteforce(
      SC, Index({1}), zeta_degree_cutoff(SC, Index({1}), pz), pz);
  CHECK(agreement_prec(rep.z.z[1], z1 * z1) >= P - 5);
}

TEST_CASE("monomial expansion validation") {
  const FqCtx& F = FqCtx::builtin(3);
  SpecialCache SC(F);
  PolylogCache PC(F);

  // no built-in expansion beyond two depth one factors
  CHECK_THROWS_AS(
      monomial_module(SC, PC, {Index({1}), Index({1}), Index({1})}, 40),
      std::invalid_argument);
  CHECK_THROWS_AS(monomial_module(SC, PC, {Index({1, 1}), Index({2})}, 40),
                  std::invalid_argument);

  // explicit expansions must be weight-consistent, nonzero, and duplicate
  // free
  std::vector<Index> fs{Index({1}), Index({2})};
  CHECK_THROWS_AS(
      monomial_module(SC, PC, fs, {{uint16_t(1), Index({1, 1})}}, 40),
      std::invalid_argument);
  CHECK_THROWS_AS(monomial_module(SC, PC, fs, {{uint16_t(0), Index({3})}}, 40),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      monomial_module(
          SC, PC, fs,
          {{uint16_t(1), Index({3})}, {uint16_t(2), Index({3})}}, 40),
      std::invalid_argument);
}
