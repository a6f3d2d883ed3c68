#include "cmzv/jet.hpp"

namespace cmzv {

Jet<RatFunc> jet_from_bipoly(const BiPoly& f, int len) {
  std::vector<RatFunc> c;
  c.reserve(size_t(len));
  for (int j = 0; j < len; ++j)
    c.push_back(RatFunc(f.hyperderivative(j).eval_t_theta()));
  return Jet<RatFunc>(std::move(c));
}

Jet<LaurentNumber> jet_to_laurent(const Jet<RatFunc>& j, long long prec) {
  std::vector<LaurentNumber> c;
  c.reserve(size_t(j.len()));
  for (int k = 0; k < j.len(); ++k)
    c.push_back(laurent_from_ratfunc(j.coeff(k), prec));
  return Jet<LaurentNumber>(std::move(c));
}

namespace {

// theta - theta^(q^m)
UniPoly twist_difference(const FqCtx& F, int m) {
  long long qm = 1;
  for (int i = 0; i < m; ++i) qm *= F.q();
  UniPoly th = UniPoly::monomial(F, Var::theta, 1, 1);
  return th - UniPoly::monomial(F, Var::theta, 1, qm);
}

}  // namespace

Jet<RatFunc> geometric_jet_exact(const FqCtx& F, int m, long long e, int len) {
  if (m < 1 || e < 1) throw std::logic_error("geometric jet needs m >= 1, e >= 1");
  UniPoly c = twist_difference(F, m);
  UniPoly cpow = c.pow(e);
  std::vector<RatFunc> out;
  out.reserve(size_t(len));
  for (int j = 0; j < len; ++j) {
    uint16_t a = F.mul(F.sign(j), binom_fq(F, e - 1 + j, j));
    out.push_back(RatFunc(UniPoly::constant(F, Var::theta, a), cpow));
    if (j + 1 < len) cpow = cpow * c;
  }
  return Jet<RatFunc>(std::move(out));
}

Jet<LaurentNumber> geometric_jet(const FqCtx& F, int m, long long e, int len,
                                 long long prec) {
  if (m < 1 || e < 1) throw std::logic_error("geometric jet needs m >= 1, e >= 1");
  UniPoly c = twist_difference(F, m);
  LaurentNumber ci =
      LaurentNumber::from_unipoly(c).truncate(std::max(prec, 1 - (long long)c.deg())).inv();
  LaurentNumber pw = ci.pow(e);
  std::vector<LaurentNumber> out;
  out.reserve(size_t(len));
  for (int j = 0; j < len; ++j) {
    uint16_t a = F.mul(F.sign(j), binom_fq(F, e - 1 + j, j));
    out.push_back(pw.scaled(a));
    if (j + 1 < len) pw = pw * ci;
  }
  return Jet<LaurentNumber>(std::move(out));
}

}  // namespace cmzv
