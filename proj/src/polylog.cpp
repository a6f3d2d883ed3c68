#include "cmzv/polylog.hpp"

#include <sstream>
#include <stdexcept>

namespace cmzv {

namespace {

long long sat_mul_nonneg(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  if (a > kOrdCap / b) return kOrdCap;
  return a * b;
}

long long floor_div(long long a, long long d) {
  return a >= 0 ? a / d : -((-a + d - 1) / d);
}

// (q-1) * ord_inf of a nonzero coordinate.
long long scaled_ord(const RatFunc& u) {
  return (long long)(u.field().q() - 1) * u.ord_inf();
}

// (q-1)-scaled lower bound for ord of u^(q^i)/LL_i^s and all its jet
// coefficients: q^i*(o + s*q) - s*q, increasing in i when o + s*q >= 0.
long long factor_floor(int q, long long o, int s, long long i) {
  long long base = sat_add(o, (long long)s * q);
  return sat_add(sat_mul_nonneg(sat_qpow(q, i), base), -(long long)s * q);
}

template <class C>
Jet<C> unit_jet(const C& one, const C& zero, int len) {
  std::vector<C> c(size_t(len), zero);
  c[0] = one;
  return Jet<C>(std::move(c));
}

Jet<LaurentNumber> truncjet(const Jet<LaurentNumber>& j, long long p) {
  std::vector<LaurentNumber> c;
  c.reserve(size_t(j.len()));
  for (int k = 0; k < j.len(); ++k) c.push_back(j.coeff(k).truncate(p));
  return Jet<LaurentNumber>(std::move(c));
}

}  // namespace

PointTuple::PointTuple(std::vector<RatFunc> entries) : u_(std::move(entries)) {
  if (u_.empty()) throw std::invalid_argument("empty point tuple");
  for (const RatFunc& x : u_) {
    if (!x.field().same(u_[0].field()) || x.var() != Var::theta)
      throw std::invalid_argument("point coordinates must share K");
  }
}

PointTuple PointTuple::from_polys(const std::vector<UniPoly>& entries) {
  std::vector<RatFunc> r;
  r.reserve(entries.size());
  for (const UniPoly& p : entries) r.push_back(RatFunc(p));
  return PointTuple(std::move(r));
}

PointTuple PointTuple::ones(const FqCtx& F, int r) {
  return PointTuple(
      std::vector<RatFunc>(size_t(r), RatFunc::one(F, Var::theta)));
}

bool PointTuple::has_zero() const {
  for (const RatFunc& x : u_)
    if (x.is_zero()) return true;
  return false;
}

bool PointTuple::all_integral() const {
  for (const RatFunc& x : u_)
    if (!x.is_poly()) return false;
  return true;
}

PointTuple PointTuple::reversed() const {
  return PointTuple(std::vector<RatFunc>(u_.rbegin(), u_.rend()));
}

std::string PointTuple::to_string() const {
  std::string out;
  for (size_t i = 0; i < u_.size(); ++i) {
    if (i) out += "; ";
    out += u_[i].to_string();
  }
  return out;
}

DomainReport domain_check(const Index& s, const PointTuple& u, Regime regime) {
  if (s.depth() != u.depth())
    throw std::invalid_argument("index and point depths differ");
  const int q = u.field().q();
  const int r = s.depth();
  DomainReport rep;
  for (int k = 1; k <= r; ++k) {
    if (u.at(k).is_zero()) continue;
    bool strict = regime == Regime::interior ? k == 1 : k == r;
    long long need = -(long long)s.at(k) * q + (strict ? 1 : 0);
    if (scaled_ord(u.at(k)) < need) {
      rep.ok = false;
      rep.violating = k;
      std::ostringstream m;
      m << "coordinate " << k << " violates |u|_inf " << (strict ? "<" : "<=")
        << " q^(" << s.at(k) * q << "/" << q - 1 << ")";
      rep.message = m.str();
      return rep;
    }
  }
  rep.ok = true;
  rep.message = u.all_integral() ? "ok"
                                 : "ok; non-integral coordinates use the "
                                   "derived denominator bound";
  return rep;
}

long long tail_bound(const Index& s, const PointTuple& u, long long n) {
  DomainReport rep = domain_check(s, u, Regime::interior);
  if (!rep.ok)
    throw std::domain_error("tail bound needs the interior bounds: " +
                            rep.message);
  if (u.has_zero()) return kOrdCap;
  const int q = u.field().q();
  long long acc = factor_floor(q, scaled_ord(u.at(1)), s.at(1), n + 1);
  // the minimum over i >= 0 of each later factor's floor sits at i = 0
  for (int k = 2; k <= s.depth(); ++k) acc = sat_add(acc, scaled_ord(u.at(k)));
  return acc >= kOrdCap ? kOrdCap : floor_div(acc, q - 1);
}

long long polylog_cutoff(const Index& s, const PointTuple& u, long long prec) {
  long long target = sat_add(prec, 10);
  for (long long n = 0; n < 256; ++n)
    if (tail_bound(s, u, n) >= target) return n;
  throw std::logic_error("no chain cutoff certifies the requested precision");
}

Jet<LaurentNumber> PolylogCache::geometric(int m, long long e, int len,
                                           long long rel) {
  Entry& ent = geo_[{m, e}];
  if (ent.jets.empty() || ent.len < len || ent.rel < rel) {
    int L = std::max(len, ent.len);
    long long R = std::max(rel, ent.rel);
    ent.jets.assign(1, geometric_jet(*F_, m, e, L, R));
    ent.len = L;
    ent.rel = R;
  }
  return ent.jets[0].truncated(len);
}

Jet<LaurentNumber> PolylogCache::ll_inverse_pow(int i, int e, int len,
                                                long long rel) {
  if (i == 0)
    return unit_jet(LaurentNumber::one(*F_), LaurentNumber::exact_zero(*F_),
                    len);
  Entry& ent = llpow_[{i, e}];
  if (ent.jets.empty() || ent.len < len || ent.rel < rel) {
    int L = std::max(len, ent.len);
    long long R = std::max(rel, ent.rel);
    Jet<LaurentNumber> j = ll_inverse_pow(i - 1, e, L, R) * geometric(i, e, L, R);
    llpow_[{i, e}] = Entry{L, R, {j}};
    return j.truncated(len);
  }
  return ent.jets[0].truncated(len);
}

namespace {

// Depth-first chain enumeration.  rho carries the (q-1)-scaled certified
// floor of the prefix; a subtree is skipped only when every term in it is
// certified beyond the working precision.
struct ChainSum {
  PolylogCache& PC;
  const Index& s;
  const PointTuple& u;
  int len;
  bool strict;
  int q, r;
  long long Pw, scaledPw, R;
  std::vector<long long> minrest;  // suffix sums of coordinate floors
  std::vector<long long> slack;    // remaining precision-dip allowance
  std::vector<LaurentNumber> ulau;
  std::vector<bool> unit_point;
  Jet<LaurentNumber> acc;

  ChainSum(PolylogCache& pc, const Index& s_, const PointTuple& u_, int len_,
           long long prec, bool strict_)
      : PC(pc),
        s(s_),
        u(u_),
        len(len_),
        strict(strict_),
        q(pc.field().q()),
        r(s_.depth()),
        Pw(prec + 10),
        scaledPw((q - 1) * (prec + 10)),
        R(0),
        acc(Jet<LaurentNumber>::zero(LaurentNumber::zero_to(pc.field(), prec + 10),
                                     len_)) {
    long long dip_total = 0;
    for (int k = 1; k <= r; ++k)
      dip_total += ((long long)s.at(k) * q + q - 2) / (q - 1);
    R = Pw + 2 * dip_total + 8;
    minrest.assign(size_t(r) + 1, 0);
    slack.assign(size_t(r) + 1, 0);
    for (int k = r - 1; k >= 0; --k) {
      minrest[size_t(k)] = sat_add(minrest[size_t(k) + 1], scaled_ord(u.at(k + 1)));
      slack[size_t(k)] = slack[size_t(k) + 1] +
                         ((long long)s.at(k + 1) * q + q - 2) / (q - 1);
    }
    ulau.reserve(size_t(r) + 1);
    ulau.push_back(LaurentNumber::exact_zero(pc.field()));
    unit_point.assign(size_t(r) + 1, false);
    for (int k = 1; k <= r; ++k) {
      long long w = -u.at(k).ord_inf() + R + 2;
      ulau.push_back(laurent_from_ratfunc(u.at(k), std::max(w, (long long)2)));
      unit_point[size_t(k)] = u.at(k) == RatFunc::one(pc.field(), Var::theta);
    }
  }

  void descend(int k, long long imax, const Jet<LaurentNumber>& prefix,
               long long rho) {
    if (k > r) {
      acc = acc + truncjet(prefix, Pw);
      return;
    }
    long long lo = strict ? r - k : 0;
    for (long long i = lo; i <= imax; ++i) {
      long long rho2 = sat_add(rho, factor_floor(q, scaled_ord(u.at(k)), s.at(k), i));
      if (sat_add(rho2, minrest[size_t(k)]) >= scaledPw) break;
      Jet<LaurentNumber> step = prefix;
      if (i > 0) step = step * PC.ll_inverse_pow(int(i), s.at(k), len, R);
      if (!unit_point[size_t(k)]) {
        long long oc = u.at(k).ord_inf() * sat_qpow(q, i);
        LaurentNumber c =
            ulau[size_t(k)].frobenius_truncated(int(i), sat_add(oc, R));
        step = step.scaled_by(c);
      }
      descend(k + 1, strict ? i - 1 : i, truncjet(step, Pw + slack[size_t(k)]),
              rho2);
    }
  }
};

PolylogJet chain_eval(PolylogCache& PC, const Index& s, const PointTuple& u,
                      int len, long long prec, bool strict) {
  if (len < 1) throw std::invalid_argument("jet length must be positive");
  if (!PC.field().same(u.field()))
    throw std::invalid_argument("cache and point fields differ");
  DomainReport rep = domain_check(s, u, Regime::interior);
  if (!rep.ok) throw std::domain_error("divergent chain sum: " + rep.message);
  const FqCtx& F = PC.field();
  if (u.has_zero())
    return PolylogJet{s, u, !strict, 0, kOrdCap,
                      Jet<LaurentNumber>::zero(LaurentNumber::exact_zero(F), len)};
  long long N = polylog_cutoff(s, u, prec);
  ChainSum cs(PC, s, u, len, prec, strict);
  cs.descend(1, N, unit_jet(LaurentNumber::one(F), LaurentNumber::exact_zero(F), len),
             0);
  Jet<LaurentNumber> value = truncjet(cs.acc, cs.Pw);
  for (int j = 0; j < value.len(); ++j)
    if (value.coeff(j).prec() < cs.Pw)
      throw std::logic_error("chain sum precision schedule broke");
  return PolylogJet{s, u, !strict, N, tail_bound(s, u, N), value};
}

// Exact, explicitly truncated chain sums; intended for small cutoffs.
Jet<RatFunc> chain_eval_exact(const Index& s, const PointTuple& u, int len,
                              long long cutoff, bool strict) {
  if (len < 1) throw std::invalid_argument("jet length must be positive");
  if (s.depth() != u.depth())
    throw std::invalid_argument("index and point depths differ");
  const FqCtx& F = u.field();
  const int r = s.depth();
  Jet<RatFunc> acc =
      Jet<RatFunc>::zero(RatFunc::zero(F, Var::theta), len);
  Jet<RatFunc> unit =
      unit_jet(RatFunc::one(F, Var::theta), RatFunc::zero(F, Var::theta), len);
  std::map<std::pair<long long, long long>, Jet<RatFunc>> llmemo;
  std::function<Jet<RatFunc>(int, int)> ll_pow = [&](int i, int e) {
    if (i == 0) return unit;
    auto it = llmemo.find({i, e});
    if (it != llmemo.end()) return it->second;
    Jet<RatFunc> j = ll_pow(i - 1, e) * geometric_jet_exact(F, i, e, len);
    llmemo.emplace(std::make_pair((long long)i, (long long)e), j);
    return j;
  };
  std::function<void(int, long long, const Jet<RatFunc>&)> descend =
      [&](int k, long long imax, const Jet<RatFunc>& prefix) {
        if (k > r) {
          acc = acc + prefix;
          return;
        }
        long long lo = strict ? r - k : 0;
        for (long long i = lo; i <= imax; ++i) {
          Jet<RatFunc> step = prefix * ll_pow(int(i), s.at(k));
          step = step.scaled_by(u.at(k).twist(int(i)));
          descend(k + 1, strict ? i - 1 : i, step);
        }
      };
  descend(1, cutoff, unit);
  return acc;
}

}  // namespace

PolylogJet cmspl_jet(PolylogCache& PC, const Index& s, const PointTuple& u,
                     int len, long long prec) {
  return chain_eval(PC, s, u, len, prec, false);
}

PolylogJet cmpl_jet(PolylogCache& PC, const Index& s, const PointTuple& u,
                    int len, long long prec) {
  return chain_eval(PC, s, u, len, prec, true);
}

Jet<RatFunc> cmspl_jet_exact(const Index& s, const PointTuple& u, int len,
                             long long cutoff) {
  return chain_eval_exact(s, u, len, cutoff, false);
}

Jet<RatFunc> cmpl_jet_exact(const Index& s, const PointTuple& u, int len,
                            long long cutoff) {
  return chain_eval_exact(s, u, len, cutoff, true);
}

}  // namespace cmzv
