#include "cmzv/decomp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "cmzv/binom.hpp"

namespace cmzv {

namespace {

long long sat_mul_nonneg(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  if (a > kOrdCap / b) return kOrdCap;
  return a * b;
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

constexpr int kHorizon = 96;

// Certified ord floors for the level-k chain factor H_{s-1}^(i) / LL_i^s
// and all its jet coefficients: f(i) = s deg L_i - twist degree of H,
// the minimum over coefficients u_j t^j of s deg L_i - q^i deg u_j - j.
// Each branch steps by q^i (s q - (q - 1) deg u_j), positive by the gate
// below, so f is strictly increasing and safe to build from saturating
// additions of nonnegative increments (a cap stays a lower bound).
struct LevelFloor {
  std::vector<long long> f;  // floors for i = 0..kHorizon+1, increasing
  long long gmin;            // f[0], the global minimum

  long long at(long long i) const {
    return f[size_t(std::min<long long>(i, kHorizon + 1))];
  }
  // floor for every term with twist > n
  long long tail(long long n) const { return at(n + 1); }
};

LevelFloor level_floor(SpecialCache& SC, int s) {
  const FqCtx& F = SC.field();
  const int q = F.q();
  const BiPoly& h = SC.H(s - 1);
  long long D = std::max(h.deg_theta(), 0);
  if ((long long)s * q <= (long long)(q - 1) * D)
    throw std::logic_error(
        "tail certificate unavailable: interpolation polynomial degree "
        "exceeds the chain decay rate");
  std::vector<long long> phi, inc;
  for (int j = 0; j <= h.deg_t(); ++j) {
    UniPoly c = h.coeff_t(j);
    if (c.is_zero()) continue;
    phi.push_back(-(c.deg() + j));
    inc.push_back((long long)s * q - (long long)(q - 1) * c.deg());
  }
  LevelFloor lf;
  lf.f.reserve(size_t(kHorizon) + 2);
  long long qp = 1;
  for (int i = 0; i <= kHorizon + 1; ++i) {
    lf.f.push_back(*std::min_element(phi.begin(), phi.end()));
    for (size_t a = 0; a < phi.size(); ++a)
      phi[a] = sat_add(phi[a], sat_mul_nonneg(qp, inc[a]));
    qp = sat_mul_nonneg(qp, q);
  }
  lf.gmin = lf.f[0];
  return lf;
}

// Depth-first enumeration of strictly decreasing twist tuples, mirroring
// the chain sums of the polylogarithm module; the numerator jets are exact
// polynomials so only the geometric factors carry relative windows.
struct DeformChain {
  SpecialCache& SC;
  PolylogCache& PC;
  const Index& s;
  int len, r;
  long long Pw, R;
  std::vector<LevelFloor> lev;
  std::vector<long long> minrest;  // suffix sums of level minima
  std::vector<long long> slack;    // remaining precision-dip allowance
  std::map<std::pair<int, long long>, Jet<LaurentNumber>> hj_;
  Jet<LaurentNumber> acc;

  DeformChain(SpecialCache& sc, PolylogCache& pc, const Index& s_, int len_,
              long long prec)
      : SC(sc),
        PC(pc),
        s(s_),
        len(len_),
        r(s_.depth()),
        Pw(prec + 10),
        acc(Jet<LaurentNumber>::zero(
            LaurentNumber::zero_to(pc.field(), prec + 10), len_)) {
    for (int k = 1; k <= r; ++k) lev.push_back(level_floor(SC, s.at(k)));
    minrest.assign(size_t(r) + 1, 0);
    slack.assign(size_t(r) + 1, 0);
    for (int k = r - 1; k >= 1; --k) {
      minrest[size_t(k)] = sat_add(minrest[size_t(k) + 1], lev[size_t(k)].gmin);
      slack[size_t(k)] =
          slack[size_t(k) + 1] + std::max(0LL, -lev[size_t(k)].gmin);
    }
    long long dip = slack[1] + std::max(0LL, -lev[0].gmin);
    R = Pw + 2 * dip + 16;
  }

  const Jet<LaurentNumber>& hjet(int k, long long i) {
    auto key = std::make_pair(k, i);
    auto it = hj_.find(key);
    if (it != hj_.end()) return it->second;
    BiPoly tw = SC.H(s.at(k) - 1).twist(int(i));
    Jet<RatFunc> jr = jet_from_bipoly(tw, len);
    std::vector<LaurentNumber> c;
    c.reserve(size_t(len));
    for (int a = 0; a < len; ++a) {
      const RatFunc& x = jr.coeff(a);
      if (x.is_zero()) {
        c.push_back(LaurentNumber::exact_zero(PC.field()));
      } else {
        LaurentNumber v = LaurentNumber::from_unipoly(x.num());
        c.push_back(v.truncate(v.ord() + R));
      }
    }
    return hj_.emplace(key, Jet<LaurentNumber>(std::move(c))).first->second;
  }

  void descend(int k, long long imax, const Jet<LaurentNumber>& prefix,
               long long rho) {
    if (k > r) {
      acc = acc + truncjet(prefix, Pw);
      return;
    }
    for (long long i = r - k; i <= imax; ++i) {
      long long rho2 = sat_add(rho, lev[size_t(k - 1)].at(i));
      // level floors increase with the twist, so pruning is final
      if (sat_add(rho2, minrest[size_t(k)]) >= Pw) break;
      Jet<LaurentNumber> step = prefix;
      if (i > 0) step = step * PC.ll_inverse_pow(int(i), s.at(k), len, R);
      step = step * hjet(k, i);
      descend(k + 1, i - 1, truncjet(step, Pw + slack[size_t(k)]), rho2);
    }
  }
};

Jet<LaurentNumber> t_jet_at_theta(const UniPoly& b, int len, const FqCtx& F) {
  Jet<RatFunc> jr = jet_from_bipoly(BiPoly::from_t(b), len);
  std::vector<LaurentNumber> c;
  c.reserve(size_t(len));
  for (int a = 0; a < len; ++a) {
    const RatFunc& x = jr.coeff(a);
    c.push_back(x.is_zero() ? LaurentNumber::exact_zero(F)
                            : LaurentNumber::from_unipoly(x.num()));
  }
  return Jet<LaurentNumber>(std::move(c));
}

}  // namespace

ZetaSeriesJet zeta_series_jet(SpecialCache& SC, PolylogCache& PC,
                              const Index& s, int order, long long prec) {
  if (order < 1) throw std::invalid_argument("jet length must be positive");
  if (prec < 1) throw std::invalid_argument("precision must be positive");
  if (!SC.field().same(PC.field()))
    throw std::invalid_argument("caches must share the field");
  const int r = s.depth();
  DeformChain dc(SC, PC, s, order, prec);
  long long N = r - 1;
  while (sat_add(dc.lev[0].tail(N), dc.minrest[1]) < dc.Pw) {
    if (++N > kHorizon)
      throw std::logic_error("no chain cutoff certifies the requested precision");
  }
  dc.descend(1, N,
             unit_jet(LaurentNumber::one(PC.field()),
                      LaurentNumber::exact_zero(PC.field()), order),
             0);
  Jet<LaurentNumber> value = truncjet(dc.acc, dc.Pw);
  for (int j = 0; j < value.len(); ++j)
    if (value.coeff(j).prec() < dc.Pw)
      throw std::logic_error("chain sum precision schedule broke");
  long long tail = sat_add(dc.lev[0].tail(N), dc.minrest[1]);
  return ZetaSeriesJet{s, order, N, tail, value};
}

CoeffExpansion expand_coefficients(SpecialCache& SC, const Index& s) {
  const int r = s.depth();
  std::vector<std::vector<RatFunc>> coeffs(static_cast<size_t>(r));
  CoeffExpansion out;
  for (int k = 1; k <= r; ++k) {
    const BiPoly& h = SC.H(s.at(k) - 1);
    int n = std::max(h.deg_t(), 0);
    out.degree.push_back(n);
    for (int j = 0; j <= n; ++j)
      coeffs[size_t(k - 1)].push_back(RatFunc(h.coeff_t(j)));
  }
  std::vector<int> j(size_t(r), 0);
  while (true) {
    std::vector<RatFunc> pt;
    pt.reserve(size_t(r));
    int td = 0;
    for (int k = 0; k < r; ++k) {
      pt.push_back(coeffs[size_t(k)][size_t(j[size_t(k)])]);
      td += j[size_t(k)];
    }
    out.terms.push_back(CoeffTerm{j, PointTuple(std::move(pt)), td});
    int k = r - 1;
    while (k >= 0 && j[size_t(k)] == out.degree[size_t(k)]) {
      j[size_t(k)] = 0;
      --k;
    }
    if (k < 0) break;
    ++j[size_t(k)];
  }
  return out;
}

std::vector<StarTerm> star_convert(const Index& s, const PointTuple& u) {
  if (s.depth() != u.depth())
    throw std::invalid_argument("index and point depths differ");
  const FqCtx& F = u.field();
  const int r = s.depth();
  std::vector<StarTerm> out;
  // bit b set keeps the boundary between coordinates b+1 and b+2
  for (long long mask = (1LL << (r - 1)) - 1; mask >= 0; --mask) {
    std::vector<int> parts;
    std::vector<RatFunc> pts;
    int cur = s.at(1);
    RatFunc cu = u.at(1);
    int k = 1;
    for (int b = 0; b < r - 1; ++b) {
      if (mask >> b & 1) {
        parts.push_back(cur);
        pts.push_back(cu);
        cur = s.at(b + 2);
        cu = u.at(b + 2);
        ++k;
      } else {
        cur += s.at(b + 2);
        cu = cu * u.at(b + 2);
      }
    }
    parts.push_back(cur);
    pts.push_back(cu);
    out.push_back(StarTerm{Index(parts), PointTuple(pts), F.sign(r - k)});
  }
  return out;
}

Decomposition decompose(SpecialCache& SC, PolylogCache& PC, const Index& s,
                        long long prec) {
  if (prec < 1) throw std::invalid_argument("precision must be positive");
  const FqCtx& F = SC.field();
  const int r = s.depth();
  CoeffExpansion ex = expand_coefficients(SC, s);
  const uint16_t gsign = F.sign(r - 1);
  std::vector<Triple> acc;
  for (const CoeffTerm& ct : ex.terms) {
    if (ct.u.has_zero()) continue;  // the whole chain sum vanishes
    UniPoly mono = UniPoly::monomial(F, Var::t, gsign, ct.tdeg);
    for (const StarTerm& st : star_convert(s, ct.u)) {
      bool found = false;
      for (Triple& tr : acc)
        if (tr.s == st.s && tr.u == st.u) {
          tr.b = tr.b + mono;
          found = true;
          break;
        }
      if (!found) acc.push_back(Triple{mono, st.s, st.u});
    }
  }
  Decomposition out{s, {}, 0, prec};
  for (const Triple& tr : acc)
    if (tr.s.depth() == 1 && !tr.b.is_zero()) {
      out.triples.push_back(tr);
      ++out.split;
    }
  for (const Triple& tr : acc)
    if (tr.s.depth() > 1 && !tr.b.is_zero()) out.triples.push_back(tr);

  // jet identity against the deformed zeta series
  const int order = 2;
  ZetaSeriesJet zs = zeta_series_jet(SC, PC, s, order, prec);
  Jet<LaurentNumber> rhs = Jet<LaurentNumber>::zero(
      LaurentNumber::zero_to(F, prec + 10), order);
  for (const Triple& tr : out.triples) {
    PolylogJet pj = cmspl_jet(PC, tr.s, tr.u, order, prec);
    Jet<LaurentNumber> bj = t_jet_at_theta(tr.b, order, F)
                                .scaled(F.sign(tr.s.depth() - 1));
    rhs = rhs + bj * pj.value;
  }
  for (int k = 0; k < order; ++k)
    if (agreement_prec(zs.value.coeff(k), rhs.coeff(k)) < prec)
      throw std::logic_error(
          "decomposition identity failed at jet coefficient " +
          std::to_string(k));

  // specialization at t = theta against the direct zeta sum
  UniPoly g = SC.gamma_index(s);
  LaurentNumber gl = LaurentNumber::from_unipoly(g);
  long long pz = prec + g.deg() + 5;
  LaurentNumber zb = zeta_bruteforce(SC, s, zeta_degree_cutoff(SC, s, pz), pz);
  if (agreement_prec(zs.value.coeff(0), gl * zb) < prec)
    throw std::logic_error(
        "decomposition specialization disagrees with the direct zeta sum");
  return out;
}

ZetaProduct zeta_product(const FqCtx& F, int s1, int s2) {
  if (s1 < 1 || s2 < 1)
    throw std::invalid_argument("exponents must be positive");
  ZetaProduct out;
  out.boundary_dropped = false;
  auto add = [&](uint16_t c, const Index& idx) {
    if (c == 0) return;
    for (auto& p : out.terms)
      if (p.second == idx) {
        p.first = F.add(p.first, c);
        return;
      }
    out.terms.emplace_back(c, idx);
  };
  add(1, Index({s1, s2}));
  add(1, Index({s2, s1}));
  add(1, Index({s1 + s2}));
  const int n = s1 + s2, q = F.q();
  for (int j = q - 1; j <= n; j += q - 1) {
    uint16_t c = F.add(F.mul(F.sign(s1 - 1), binom_fq(F, j - 1, s1 - 1)),
                       F.mul(F.sign(s2 - 1), binom_fq(F, j - 1, s2 - 1)));
    if (j == n) {
      // i = 0 has no valid index; record that a term was dropped
      if (c != 0) out.boundary_dropped = true;
      continue;
    }
    add(c, Index({n - j, j}));
  }
  std::vector<std::pair<uint16_t, Index>> kept;
  for (const auto& p : out.terms)
    if (p.first != 0) kept.push_back(p);
  out.terms = std::move(kept);
  return out;
}

}  // namespace cmzv
