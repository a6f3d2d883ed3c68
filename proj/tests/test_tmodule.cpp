#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "cmzv/special.hpp"
#include "cmzv/tmodule.hpp"

using namespace cmzv;

namespace {

RatFunc theta_pow(const FqCtx& F, long long n) {
  return RatFunc(UniPoly::monomial(F, Var::theta, 1, n));
}

LaurentNumber laur(const RatFunc& x, long long prec) {
  if (x.is_zero()) return LaurentNumber::zero_to(x.field(), prec);
  if (x.is_poly()) return LaurentNumber::from_unipoly(x.num());
  return laurent_from_quotient(x.num(), x.den(), x.ord_inf() + prec);
}

UniPoly tpoly(const FqCtx& F, std::vector<uint16_t> coeffs) {
  return UniPoly(F, Var::t, std::move(coeffs));
}

BiPoly t_minus_theta(const FqCtx& F) {
  return BiPoly::monomial(F, 1, 0, 1) - BiPoly::monomial(F, 1, 1, 0);
}

}  // namespace

TEST_CASE("twisted matrix arithmetic") {
  const FqCtx& F = FqCtx::builtin(2);
  RatFunc z = RatFunc::zero(F, Var::theta);
  RatFunc th = theta_pow(F, 1);
  Mat<RatFunc> a(1, 1, th);
  TwistedMatrix at = TwistedMatrix::from_matrix(a, 1);
  TwistedMatrix prod = at * at;
  // (theta tau)(theta tau) = theta^(1+q) tau^2
  CHECK(prod.tau_degree() == 2);
  CHECK(prod.coeff(2).at(0, 0) == theta_pow(F, 3));
  CHECK(prod.coeff(0).at(0, 0) == z);
  CHECK(prod.coeff(1).at(0, 0) == z);

  TwistedMatrix id = TwistedMatrix::identity(F, 1);
  CHECK(id * at == at);
  CHECK(at * id == at);
  CHECK((at - at).tau_degree() == -1);
  CHECK(at.partial().at(0, 0) == z);

  // Carlitz action theta z + z^q on an exact point.
  TwistedMatrix rho = TwistedMatrix::from_matrix(a, 0);
  rho.add_term(Mat<RatFunc>(1, 1, RatFunc::one(F, Var::theta)), 1);
  std::vector<RatFunc> val = rho.apply({theta_pow(F, 2)});
  CHECK(val[0] == theta_pow(F, 3) + theta_pow(F, 4));

  TwistedMatrix wide(F, 1, 2);
  CHECK_THROWS_AS(at + wide, std::logic_error);
  CHECK_THROWS_AS(at.coeff(-1), std::logic_error);
}

TEST_CASE("module construction goldens") {
  const FqCtx& F = FqCtx::builtin(2);
  RatFunc z = RatFunc::zero(F, Var::theta);
  RatFunc one = RatFunc::one(F, Var::theta);
  RatFunc th = theta_pow(F, 1);

  // Index (3,1) at (theta^2, 1): blocks (4, 1), tau part supported on the
  // block-last rows, special point (0,0,0,theta^2,1) in characteristic 2.
  TModule G = build_module(F, Index({3, 1}),
                           PointTuple({theta_pow(F, 2), one}));
  CHECK(G.dim() == 5);
  CHECK(G.blocks() == std::vector<int>{4, 1});
  CHECK(G.block_start(2) == 4);
  Mat<RatFunc> a0 = G.rho_t().partial();
  CHECK(a0.at(0, 0) == th);
  CHECK(a0.at(0, 1) == one);
  CHECK(a0.at(3, 4) == z);
  CHECK(a0.at(4, 4) == th);
  Mat<RatFunc> e = G.rho_t().coeff(1);
  CHECK(e.at(3, 0) == one);
  CHECK(e.at(3, 4) == theta_pow(F, 2));  // -theta^2 in characteristic 2
  CHECK(e.at(4, 4) == one);
  CHECK(e.at(0, 0) == z);
  const std::vector<RatFunc>& v = G.special_point();
  CHECK(v[0] == z);
  CHECK(v[3] == theta_pow(F, 2));
  CHECK(v[4] == one);

  // Same index at (1, 1): rho(t) applied to the special point.
  TModule G4 = build_module(F, Index({3, 1}), PointTuple::ones(F, 2));
  std::vector<RatFunc> img = G4.rho_t().apply(G4.special_point());
  std::vector<RatFunc> expect{z, z, one, th + one, th + one};
  CHECK(img == expect);

  // Depth one gives the Carlitz tensor power shape.
  TModule C3 = carlitz_tensor(F, 3);
  CHECK(C3.dim() == 3);
  CHECK(C3.rho_t().coeff(1).at(2, 0) == one);
  CHECK(C3.rho_t().coeff(1).at(0, 0) == z);

  // The differential part is validated at construction.
  Mat<RatFunc> bad(2, 2, z);
  bad.at(0, 0) = th;
  bad.at(1, 1) = th + one;
  CHECK_THROWS_AS(TModule(F, std::vector<int>{2}, TwistedMatrix::from_matrix(bad)),
                  std::invalid_argument);
}

TEST_CASE("t-action is a ring homomorphism") {
  const FqCtx& F = FqCtx::builtin(2);
  TModule G = build_module(F, Index({1, 2}),
                           PointTuple({theta_pow(F, 1), RatFunc::one(F, Var::theta)}));
  UniPoly a = tpoly(F, {1, 0, 1});     // t^2 + 1
  UniPoly b = tpoly(F, {0, 1, 0, 1});  // t^3 + t
  CHECK(rho_poly(G, a * b) == rho_poly(G, a) * rho_poly(G, b));
  CHECK(rho_poly(G, a + b) == rho_poly(G, a) + rho_poly(G, b));
  CHECK(rho_poly(G, tpoly(F, {1})) == TwistedMatrix::identity(F, G.dim()));

  const FqCtx& F3 = FqCtx::builtin(3);
  TModule H = build_module(F3, Index({2}), PointTuple::ones(F3, 1));
  UniPoly c = tpoly(F3, {2, 1});  // t + 2
  UniPoly d = tpoly(F3, {0, 0, 1});
  CHECK(rho_poly(H, c * d) == rho_poly(H, c) * rho_poly(H, d));
}

TEST_CASE("differential of the t-action") {
  const FqCtx& F = FqCtx::builtin(2);
  RatFunc z = RatFunc::zero(F, Var::theta);
  RatFunc one = RatFunc::one(F, Var::theta);
  RatFunc th = theta_pow(F, 1);
  TModule G = build_module(F, Index({2}), PointTuple::ones(F, 1));

  CHECK(d_rho(G, BiPoly::one(F)) ==
        Mat<RatFunc>::identity(2, z, one));
  Mat<RatFunc> dt = d_rho(G, BiPoly::from_t(tpoly(F, {0, 1})));
  CHECK(dt.at(0, 0) == th);
  CHECK(dt.at(0, 1) == one);
  CHECK(dt.at(1, 0) == z);
  CHECK(dt.at(1, 1) == th);

  // Multiplicative on polynomials in t.
  BiPoly p = BiPoly::from_t(tpoly(F, {1, 1}));
  BiPoly q = BiPoly::from_t(tpoly(F, {0, 1, 1}));
  CHECK(d_rho(G, p * q) == d_rho(G, p) * d_rho(G, q));
  CHECK_THROWS_AS(d_rho(G, BiPoly::from_theta(UniPoly::monomial(F, Var::theta, 1, 1))),
                  std::invalid_argument);

  // Nilpotency of the differential above theta.
  TModule W = build_module(F, Index({3, 1}),
                           PointTuple({theta_pow(F, 2), one}));
  Mat<RatFunc> n = d_rho(W, BiPoly::from_t(tpoly(F, {0, 1})));
  for (int i = 0; i < W.dim(); ++i) n.at(i, i) = n.at(i, i) - th;
  Mat<RatFunc> pw = n;
  for (int k = 1; k < 4; ++k) pw = pw * n;
  for (int i = 0; i < W.dim(); ++i)
    for (int j = 0; j < W.dim(); ++j) CHECK(pw.at(i, j) == z);
}

TEST_CASE("carlitz exponential and logarithm coefficients") {
  for (int q : {2, 3}) {
    const FqCtx& F = FqCtx::builtin(q);
    SpecialCache SC(F);
    TModule C = carlitz_tensor(F, 1);
    const ExpLogStream& st = exp_log_coeffs(C, 5);
    CHECK(&st.parent() == &C);
    CHECK(st.computed_order() == 5);
    RatFunc one = RatFunc::one(F, Var::theta);
    for (int i = 1; i <= 5; ++i) {
      CHECK(st.exp_coeff(i).at(0, 0) == RatFunc(UniPoly::one(F, Var::theta), SC.D(i)));
      CHECK(st.log_coeff(i).at(0, 0) == RatFunc(UniPoly::one(F, Var::theta), SC.L(i)));
    }
    // Composition in the other direction as well.
    for (int n = 1; n <= 3; ++n) {
      RatFunc acc = RatFunc::zero(F, Var::theta);
      for (int a = 0; a <= n; ++a)
        acc = acc + st.log_coeff(a).at(0, 0) * st.exp_coeff(n - a).at(0, 0).twist(a);
      CHECK(acc.is_zero());
    }
    (void)one;
  }
}

TEST_CASE("exp and log functional equations") {
  const FqCtx& F = FqCtx::builtin(2);
  TModule G = build_module(F, Index({3, 1}),
                           PointTuple({theta_pow(F, 2), RatFunc::one(F, Var::theta)}));
  const int N = 3;
  const ExpLogStream& st = exp_log_coeffs(G, N);
  TwistedMatrix texp(F, G.dim(), G.dim());
  TwistedMatrix tlog(F, G.dim(), G.dim());
  for (int i = 0; i <= N; ++i) {
    texp.add_term(st.exp_coeff(i), i);
    tlog.add_term(st.log_coeff(i), i);
  }
  TwistedMatrix a0 = TwistedMatrix::from_matrix(G.rho_t().partial());
  TwistedMatrix lhs = G.rho_t() * texp;   // rho(t) . Exp
  TwistedMatrix rhs = texp * a0;          // Exp . drho(t)
  for (int k = 0; k <= N; ++k) CHECK(lhs.coeff(k) == rhs.coeff(k));
  TwistedMatrix lhs2 = tlog * G.rho_t();  // Log . rho(t)
  TwistedMatrix rhs2 = a0 * tlog;         // drho(t) . Log
  for (int k = 0; k <= N; ++k) CHECK(lhs2.coeff(k) == rhs2.coeff(k));
}

TEST_CASE("numeric stream mirrors the exact stream") {
  const FqCtx& F = FqCtx::builtin(2);
  TModule G = build_module(F, Index({3, 1}),
                           PointTuple({theta_pow(F, 2), RatFunc::one(F, Var::theta)}));
  const ExpLogStream& st = exp_log_coeffs(G, 3);
  const NumericStream& ns = G.numeric_stream(150, 3);
  for (int i = 0; i <= 3; ++i)
    for (int a = 0; a < G.dim(); ++a)
      for (int b = 0; b < G.dim(); ++b) {
        const RatFunc& ex = st.exp_coeff(i).at(a, b);
        const RatFunc& px = st.log_coeff(i).at(a, b);
        if (!ex.is_zero())
          CHECK(agreement_prec(ns.e[size_t(i)].at(a, b), laur(ex, 120)) >= 80);
        else
          CHECK(ns.e[size_t(i)].at(a, b).is_zero());
        if (!px.is_zero())
          CHECK(agreement_prec(ns.p[size_t(i)].at(a, b), laur(px, 120)) >= 80);
        else
          CHECK(ns.p[size_t(i)].at(a, b).is_zero());
      }
}

TEST_CASE("carlitz logarithm and exponential at a point") {
  const FqCtx& F = FqCtx::builtin(2);
  TModule C = carlitz_tensor(F, 1);
  SpecialCache SC(F);
  const long long P = 60;
  std::vector<RatFunc> z{RatFunc(UniPoly::one(F, Var::theta),
                                 UniPoly::monomial(F, Var::theta, 1, 1))};
  PointEval lg = log_eval(C, z, P);
  CHECK(lg.prec == P);
  CHECK(lg.value[0].prec() == P);
  // Oracle: Log(1/theta) = sum 1/(theta^(q^i) L_i).
  LaurentNumber oracle = LaurentNumber::zero_to(F, P);
  long long qi = 1;
  for (int i = 0; i <= 6; ++i) {
    UniPoly den = SC.L(i) * UniPoly::monomial(F, Var::theta, 1, qi);
    oracle = oracle + laurent_from_quotient(UniPoly::one(F, Var::theta), den, P);
    qi *= 2;
  }
  CHECK(agrees_through(lg.value[0], oracle, P));
  // Round trip back through Exp.
  PointEval back = exp_eval(C, lg.value, P - 25);
  CHECK(agrees_through(back.value[0], laur(z[0], P), P - 25));
  CHECK(back.heuristic);
  CHECK(lg.heuristic);  // 1/theta is not the module's special point
  PointEval at_one = log_eval(C, C.special_point(), 40);
  CHECK(!at_one.heuristic);
}

TEST_CASE("depth one logarithm matches the chain sum jets") {
  for (int q : {2, 3}) {
    const FqCtx& F = FqCtx::builtin(q);
    PolylogCache pc(F);
    TModule G = build_module(F, Index({2}), PointTuple::ones(F, 1));
    const long long P = 50;
    PointEval lg = log_eval(G, G.special_point(), P);
    PolylogJet cm = cmspl_jet(pc, Index({2}), PointTuple::ones(F, 1), 2, P);
    CHECK(agrees_through(lg.value[0], cm.value.coeff(1), P));
    CHECK(agrees_through(lg.value[1], cm.value.coeff(0), P));
  }
}

TEST_CASE("logarithm domain guard") {
  const FqCtx& F = FqCtx::builtin(2);
  TModule G = build_module(F, Index({1}), PointTuple({theta_pow(F, 5)}));
  CHECK_THROWS_AS(log_eval(G, G.special_point(), 20), std::domain_error);
  // Exp has no domain restriction.
  PointEval ex = exp_eval(G, G.special_point(), 20);
  CHECK(ex.prec == 20);
}

TEST_CASE("interpolation maps") {
  const FqCtx& F = FqCtx::builtin(2);
  RatFunc z = RatFunc::zero(F, Var::theta);
  RatFunc one = RatFunc::one(F, Var::theta);
  TModule G = build_module(F, Index({3, 1}),
                           PointTuple({theta_pow(F, 2), one}));

  // Row ((t - theta)^3, 0) hits the first basis vector.
  BiPoly tt = t_minus_theta(F);
  std::vector<BiPoly> rows{tt.pow(3), BiPoly::zero(F)};
  std::vector<RatFunc> img = delta0_iota_exact(G, rows);
  std::vector<RatFunc> expect{one, z, z, z, z};
  CHECK(img == expect);

  // A constant row lands in the block-last slot.
  std::vector<BiPoly> rows2{BiPoly::from_theta(UniPoly::monomial(F, Var::theta, 1, 2)),
                            BiPoly::zero(F)};
  std::vector<RatFunc> img2 = delta0_iota_exact(G, rows2);
  CHECK(img2[3] == theta_pow(F, 2));
  CHECK(img2[0] == z);
  CHECK(img2[4] == z);

  // delta_1 . iota of the canonical coefficients returns the special point.
  WCoeffs c = w_from_special_point(G);
  CHECK(delta1_iota(G, c) == G.special_point());
  CHECK(c[0][3] == theta_pow(F, 2));
  CHECK(c[0][0] == z);
  CHECK(c[1][0] == one);

  // Jet rows must be long enough for their block.
  Jet<LaurentNumber> shortjet =
      Jet<LaurentNumber>::zero(LaurentNumber::exact_zero(F), 2);
  CHECK_THROWS_AS(delta0_iota(G, {shortjet, shortjet}), std::invalid_argument);
  WCoeffs badc{{z}, {z}};
  CHECK_THROWS_AS(delta1_iota(G, badc), std::invalid_argument);
}

TEST_CASE("difference equation series and the exponential identity") {
  const FqCtx& F = FqCtx::builtin(2);
  PolylogCache pc(F);
  RatFunc one = RatFunc::one(F, Var::theta);
  Index s({3, 1});
  PointTuple u({theta_pow(F, 2), one});
  TModule G = build_module(F, s, u);
  WCoeffs c = w_from_special_point(G);

  // Theta entries are jets of scaled geometric factors.
  ThetaApparatus ta(pc, s, u);
  CHECK(ta.entry(1, 1, 1, 3, 40).coeff(0).ord() == 8);  // (d_1 + 0) q
  CHECK(ta.entry(1, 2, 2, 3, 40).coeff(0).ord() == 2);

  // w jets at n = 0 reproduce the canonical coefficients.
  Jet<LaurentNumber> w0 = ta.w_jet(c, 1, 0, 4, 60);
  CHECK(w0.coeff(0) == LaurentNumber::from_unipoly(UniPoly::monomial(F, Var::theta, 1, 2)));
  CHECK(w0.coeff(3).is_zero());

  // The series passes its internal difference-equation check and feeds the
  // exponential identity: Exp(delta_0 . iota(g + w)) = delta_1 . iota(w) = v.
  const long long P = 100;
  GSeries gs = g_series(pc, s, u, c, 4, P);
  CHECK(gs.terms >= 2);
  CHECK(gs.tail_ord >= P + 10);
  std::vector<Jet<LaurentNumber>> rows;
  rows.push_back(gs.g[0] + ta.w_jet(c, 1, 0, 4, P + 40));
  Jet<LaurentNumber> g2{std::vector<LaurentNumber>(
      gs.g[1].coeffs().begin(), gs.g[1].coeffs().begin() + 1)};
  rows.push_back(g2 + ta.w_jet(c, 2, 0, 1, P + 40));
  std::vector<LaurentNumber> lie = delta0_iota(G, rows);
  PointEval back = exp_eval(G, lie, 60);
  const std::vector<RatFunc>& v = G.special_point();
  for (int k = 0; k < G.dim(); ++k)
    CHECK(agrees_through(back.value[size_t(k)], laur(v[size_t(k)], 70), 60));

  // Violating the coefficient growth bound is rejected.
  WCoeffs huge{{theta_pow(F, 9)}};
  CHECK_THROWS_AS(g_series(pc, Index({1}), PointTuple::ones(F, 1), huge, 1, 30),
                  std::domain_error);
}

TEST_CASE("logarithm routes agree") {
  const FqCtx& F = FqCtx::builtin(2);
  PolylogCache pc(F);
  RatFunc one = RatFunc::one(F, Var::theta);
  TModule G = build_module(F, Index({3, 1}), PointTuple({theta_pow(F, 2), one}));

  // Partial sum with no twisted term is the canonical coefficient stack.
  std::vector<LaurentNumber> lie0 = logformula_partial(pc, G, 0, 30);
  const std::vector<RatFunc>& v = G.special_point();
  for (int k = 0; k < G.dim(); ++k)
    CHECK(agrees_through(lie0[size_t(k)], laur(v[size_t(k)], 40), 30));

  const long long P = 50;
  LogPaths lp = logformula_series(pc, G, P);
  CHECK(lp.agree >= P);
  CHECK(lp.tail_ord >= P + 10);
  // Block-last coordinates are star chain sums of the reversed suffixes; in
  // characteristic 2 the sign is absorbed.
  PolylogJet top = cmspl_jet(pc, Index({1, 3}),
                             PointTuple({one, theta_pow(F, 2)}), 1, P);
  CHECK(agrees_through(lp.stream[3], top.value.coeff(0), P));
  PolylogJet low = cmspl_jet(pc, Index({1}), PointTuple::ones(F, 1), 1, P);
  CHECK(agrees_through(lp.stream[4], low.value.coeff(0), P));

  // Determinism across precisions: the higher run extends the lower one.
  LogPaths wide = logformula_series(pc, G, P + 40);
  for (int k = 0; k < G.dim(); ++k)
    CHECK(agreement_prec(lp.series[size_t(k)], wide.series[size_t(k)]) >= P);
}

TEST_CASE("logarithm routes agree at depth one over F3") {
  const FqCtx& F = FqCtx::builtin(3);
  PolylogCache pc(F);
  TModule G = build_module(F, Index({2}), PointTuple({theta_pow(F, 1)}));
  LogPaths lp = logformula_series(pc, G, 40);
  CHECK(lp.agree >= 40);
  PolylogJet cm = cmspl_jet(pc, Index({2}), PointTuple({theta_pow(F, 1)}), 1, 40);
  CHECK(agrees_through(lp.series[1], cm.value.coeff(0), 40));
}
