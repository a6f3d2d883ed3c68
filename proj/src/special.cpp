#include "cmzv/special.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cmzv {

namespace {

// Brute enumeration guard: q^d must stay within this many terms.
constexpr long long kBruteBudget = 1LL << 20;

UniPoly monic_from_counter(const FqCtx& F, int d, long long k) {
  std::vector<uint16_t> c(size_t(d) + 1, 0);
  for (int i = 0; i < d; ++i) {
    c[size_t(i)] = uint16_t(k % F.q());
    k /= F.q();
  }
  c[size_t(d)] = 1;
  return UniPoly(F, Var::theta, std::move(c));
}

long long brute_count(const FqCtx& F, int d) {
  long long n = 1;
  for (int i = 0; i < d; ++i) {
    n *= F.q();
    if (n > kBruteBudget)
      throw std::domain_error("power sum enumeration budget exceeded");
  }
  return n;
}

// Fixed-tree pairwise reduction: the combine shape depends only on the index
// range, so any evaluation order (serial or parallel) gives the same result.
template <class T, class Leaf>
T reduce_range(long long lo, long long hi, const Leaf& leaf) {
  if (hi - lo == 1) return leaf(lo);
  long long mid = lo + (hi - lo) / 2;
  return reduce_range<T>(lo, mid, leaf) + reduce_range<T>(mid, hi, leaf);
}

}  // namespace

Index::Index(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("index needs at least one entry");
  for (int s : parts_)
    if (s < 1) throw std::invalid_argument("index entries must be positive");
}

int Index::weight() const {
  int w = 0;
  for (int s : parts_) w += s;
  return w;
}

int Index::block_dim(int i) const {
  if (i < 1 || i > depth() + 1) throw std::out_of_range("block index");
  int w = 0;
  for (size_t k = size_t(i) - 1; k < parts_.size(); ++k) w += parts_[k];
  return w;
}

int Index::total_dim() const {
  int d = 0;
  for (int i = 1; i <= depth(); ++i) d += block_dim(i);
  return d;
}

Index Index::reversed() const {
  std::vector<int> p(parts_.rbegin(), parts_.rend());
  return Index(std::move(p));
}

Index Index::suffix(int i) const {
  if (i < 1 || i > depth()) throw std::out_of_range("suffix start");
  return Index(std::vector<int>(parts_.begin() + (i - 1), parts_.end()));
}

std::string Index::to_string() const {
  std::ostringstream os;
  for (size_t k = 0; k < parts_.size(); ++k) {
    if (k) os << ",";
    os << parts_[k];
  }
  return os.str();
}

SpecialCache::SpecialCache(const FqCtx& F) : F_(&F) {}

const UniPoly& SpecialCache::D(int i) {
  if (i < 0) throw std::out_of_range("D index");
  if (d_.empty()) d_.push_back(UniPoly::one(*F_, Var::theta));
  while ((int)d_.size() <= i) {
    int m = (int)d_.size();
    long long qm = sat_qpow(F_->q(), m);
    UniPoly f = UniPoly::monomial(*F_, Var::theta, 1, qm) -
                UniPoly::monomial(*F_, Var::theta, 1, 1);
    d_.push_back(f * d_.back().twist(1));
  }
  return d_[size_t(i)];
}

const UniPoly& SpecialCache::L(int i) {
  if (i < 0) throw std::out_of_range("L index");
  if (l_.empty()) l_.push_back(UniPoly::one(*F_, Var::theta));
  while ((int)l_.size() <= i) {
    int m = (int)l_.size();
    long long qm = sat_qpow(F_->q(), m);
    UniPoly f = UniPoly::monomial(*F_, Var::theta, 1, 1) -
                UniPoly::monomial(*F_, Var::theta, 1, qm);
    l_.push_back(f * l_.back());
  }
  return l_[size_t(i)];
}

long long SpecialCache::L_degree(int d) const {
  long long e = 0;
  long long qi = 1;
  for (int i = 1; i <= d; ++i) {
    if (qi > kOrdCap / F_->q()) return kOrdCap;
    qi *= F_->q();
    e = sat_add(e, qi);
  }
  return e;
}

std::vector<int> SpecialCache::L_deformation_exponents(int i) const {
  if (i < 0) throw std::out_of_range("L deformation index");
  std::vector<int> m(size_t(i), 0);
  for (int k = 1; k <= i; ++k) m[size_t(k) - 1] = k;
  return m;
}

BiPoly SpecialCache::L_deformation(int i) {
  BiPoly acc = BiPoly::one(*F_);
  for (int m : L_deformation_exponents(i)) {
    long long qm = sat_qpow(F_->q(), m);
    BiPoly f = BiPoly::monomial(*F_, 1, 0, 1) - BiPoly::monomial(*F_, 1, qm, 0);
    acc = acc * f;
  }
  return acc;
}

const UniPoly& SpecialCache::gamma(int n) {
  if (n < 1) throw std::out_of_range("Carlitz factorial index");
  if (gamma_.empty()) gamma_.push_back(UniPoly::one(*F_, Var::theta));
  while ((int)gamma_.size() <= n) {
    int m = (int)gamma_.size();
    UniPoly g = UniPoly::one(*F_, Var::theta);
    long long rest = m - 1;
    for (int i = 0; rest > 0; ++i, rest /= F_->q()) {
      int digit = int(rest % F_->q());
      for (int k = 0; k < digit; ++k) g = g * D(i);
    }
    gamma_.push_back(std::move(g));
  }
  return gamma_[size_t(n)];
}

UniPoly SpecialCache::gamma_t(int n) { return gamma(n).with_var(Var::t); }

UniPoly SpecialCache::gamma_index(const Index& s) {
  UniPoly g = UniPoly::one(*F_, Var::theta);
  for (int i = 1; i <= s.depth(); ++i) g = g * gamma(s.at(i));
  return g;
}

const BiPoly& SpecialCache::H(int n) {
  if (n < 0) throw std::out_of_range("H index");
  if (h_.empty()) {
    h_num_.push_back(BiPoly::one(*F_));
    h_den_.push_back(UniPoly::one(*F_, Var::t));
    h_.push_back(BiPoly::one(*F_));
  }
  while ((int)h_.size() <= n) {
    int m = (int)h_.size();
    // B_m = sum over q^i <= m of (G_i / D_i|_{theta=t}) B_{m-q^i}, tracked as
    // one fraction over the lcm of the contributing denominators.
    std::vector<BiPoly> nums;
    std::vector<UniPoly> dens;
    long long qi = 1;
    for (int i = 0; qi <= m; ++i) {
      BiPoly g = BiPoly::one(*F_);
      for (int j = 1; j <= i; ++j) {
        long long qj = sat_qpow(F_->q(), j);
        g = g * (BiPoly::monomial(*F_, 1, 0, qi) -
                 BiPoly::monomial(*F_, 1, qj, 0));
      }
      nums.push_back(g * h_num_[size_t(m - qi)]);
      dens.push_back(D(i).with_var(Var::t) * h_den_[size_t(m - qi)]);
      if (qi > m / F_->q()) break;
      qi *= F_->q();
    }
    UniPoly den = UniPoly::one(*F_, Var::t);
    for (const UniPoly& q : dens)
      den = (den * q).exact_div(UniPoly::gcd(den, q));
    BiPoly num = BiPoly::zero(*F_);
    for (size_t k = 0; k < nums.size(); ++k)
      num = num + nums[k] * BiPoly::from_t(den.exact_div(dens[k]));
    h_num_.push_back(num);
    h_den_.push_back(den);
    h_.push_back((num * BiPoly::from_t(gamma_t(m + 1))).exact_div_t(den));
  }
  return h_[size_t(n)];
}

long long SpecialCache::h_twist_degree(int s, int d) {
  const BiPoly& h = H(s - 1);
  long long qd = sat_qpow(F_->q(), d);
  long long best = 0;
  for (int j = 0; j <= h.deg_t(); ++j) {
    UniPoly c = h.coeff_t(j);
    if (c.is_zero()) continue;
    long long v = qd * (long long)c.deg() + j;
    best = std::max(best, std::min(v, kOrdCap));
  }
  return best;
}

long long SpecialCache::power_sum_ord(int d, int s) {
  if (d < 0 || s < 1) throw std::out_of_range("power sum parameters");
  const BiPoly& h = H(s - 1);
  long long m = 0;
  if (!h.norm1_exp(m)) throw std::logic_error("vanishing coefficient polynomial");
  // The interpolation bound grows in d only because of this degree bound.
  if ((long long)(F_->q() - 1) * m >= (long long)s * F_->q())
    throw std::logic_error("power sum certificate needs the coefficient degree bound");
  long long coarse = (long long)s * d;
  long long qd = sat_qpow(F_->q(), d);
  if (qd >= kOrdCap) return kOrdCap;
  long long E = L_degree(d);
  if (E >= kOrdCap) return kOrdCap;
  long long interp = (long long)gamma(s).deg() + (long long)s * E -
                     h_twist_degree(s, d);
  return std::max(coarse, std::min(interp, kOrdCap));
}

void for_each_monic(const FqCtx& F, int d,
                    const std::function<void(const UniPoly&)>& fn) {
  if (d < 0) throw std::out_of_range("monic degree");
  long long n = brute_count(F, d);
  for (long long k = 0; k < n; ++k) fn(monic_from_counter(F, d, k));
}

RatFunc power_sum(SpecialCache& C, int d, int s, PowerSumMode mode) {
  if (d < 0 || s < 1) throw std::out_of_range("power sum parameters");
  const FqCtx& F = C.field();
  if (mode == PowerSumMode::interp) {
    UniPoly num = C.H(s - 1).twist(d).eval_t_theta();
    UniPoly den = C.gamma(s) * C.L(d).pow(s);
    return RatFunc(num, den);
  }
  long long n = brute_count(F, d);
  return reduce_range<RatFunc>(0, n, [&](long long k) {
    UniPoly a = monic_from_counter(F, d, k);
    return RatFunc(UniPoly::one(F, Var::theta), a.pow(s));
  });
}

LaurentNumber power_sum_laurent(SpecialCache& C, int d, int s, long long prec,
                                PowerSumMode mode) {
  if (d < 0 || s < 1) throw std::out_of_range("power sum parameters");
  const FqCtx& F = C.field();
  if (mode == PowerSumMode::interp) {
    UniPoly num = C.H(s - 1).twist(d).eval_t_theta();
    UniPoly den = C.gamma(s) * C.L(d).pow(s);
    return laurent_from_quotient(num, den, prec);
  }
  long long n = brute_count(F, d);
  UniPoly one = UniPoly::one(F, Var::theta);
  return reduce_range<LaurentNumber>(0, n, [&](long long k) {
    UniPoly a = monic_from_counter(F, d, k);
    return laurent_from_quotient(one, a.pow(s), prec);
  });
}

long long zeta_tail_ord(SpecialCache& C, const Index& s, int Dmax) {
  int r = s.depth();
  if (Dmax < r - 1)
    throw std::invalid_argument(
        "degree cap below the minimal strictly decreasing pattern");
  // Every omitted term has d_1 > Dmax and d_i >= r-i; power_sum_ord is
  // increasing in d, so these floors bound each factor from below.
  long long tail = C.power_sum_ord(Dmax + 1, s.at(1));
  for (int i = 2; i <= r; ++i)
    tail = sat_add(tail, C.power_sum_ord(r - i, s.at(i)));
  return tail;
}

int zeta_degree_cutoff(SpecialCache& C, const Index& s, long long prec) {
  for (int Dmax = s.depth() - 1; Dmax < 1000; ++Dmax)
    if (zeta_tail_ord(C, s, Dmax) >= prec + 10) return Dmax;
  throw std::logic_error("zeta tail certificate failed to reach the target");
}

LaurentNumber zeta_bruteforce(SpecialCache& C, const Index& s, int Dmax,
                              long long prec) {
  const FqCtx& F = C.field();
  int r = s.depth();
  long long tail = zeta_tail_ord(C, s, Dmax);
  long long target = std::min(prec, tail);
  // layer i holds, per degree d, the sum over strictly decreasing tails
  // (d_i, ..., d_r) with d_i = d of the product of their power sums.
  std::vector<LaurentNumber> layer;
  for (int i = r; i >= 1; --i) {
    int dmin = r - i;
    int dcap = Dmax - (i - 1);
    std::vector<LaurentNumber> next;
    LaurentNumber below = LaurentNumber::zero_to(F, prec);
    for (int d = 0; d <= dcap; ++d) {
      if (i < r && d >= 1 && d - 1 < (int)layer.size())
        below = below + layer[size_t(d - 1)];
      if (d < dmin) {
        next.push_back(LaurentNumber::zero_to(F, prec));
        continue;
      }
      LaurentNumber Sd = power_sum_laurent(C, d, s.at(i), prec,
                                           PowerSumMode::interp);
      next.push_back(i == r ? Sd : Sd * below);
    }
    layer = std::move(next);
  }
  LaurentNumber acc = LaurentNumber::zero_to(F, prec);
  for (const LaurentNumber& term : layer) acc = acc + term;
  return acc.truncate(target);
}

}  // namespace cmzv
