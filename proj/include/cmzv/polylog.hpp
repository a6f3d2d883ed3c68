#pragma once

#include <map>
#include <string>
#include <vector>

#include "cmzv/jet.hpp"
#include "cmzv/special.hpp"

namespace cmzv {

// Evaluation point u = (u_1, ..., u_r): entries in K, paired with an index
// of equal depth.
class PointTuple {
public:
  explicit PointTuple(std::vector<RatFunc> entries);
  static PointTuple from_polys(const std::vector<UniPoly>& entries);
  static PointTuple ones(const FqCtx& F, int r);

  int depth() const { return int(u_.size()); }
  const RatFunc& at(int i) const { return u_.at(size_t(i) - 1); }  // 1-based
  const std::vector<RatFunc>& entries() const { return u_; }
  const FqCtx& field() const { return u_[0].field(); }
  bool has_zero() const;
  bool all_integral() const;  // every coordinate a polynomial
  PointTuple reversed() const;

  bool operator==(const PointTuple& o) const { return u_ == o.u_; }
  bool operator!=(const PointTuple& o) const { return !(*this == o); }
  std::string to_string() const;  // semicolon-separated coordinates

private:
  std::vector<RatFunc> u_;
};

// Convergence regimes: interior governs the chain series itself (strict
// bound on the first coordinate), boundary governs logarithm convergence
// (strict bound on the last coordinate).
enum class Regime { interior, boundary };

struct DomainReport {
  bool ok = false;
  int violating = 0;    // 1-based coordinate of the first violation, 0 if none
  std::string message;  // names the violating coordinate and bound
};

// Coordinate k must satisfy |u_k|_inf < q^(s_k q/(q-1)) where strict and
// <= elsewhere; zero coordinates pass trivially.
DomainReport domain_check(const Index& s, const PointTuple& u, Regime regime);

// Sound lower bound on ord_inf of every jet coefficient of every chain term
// omitted when the sum is truncated at i_1 <= n; strictly increasing in n.
// Requires the interior-regime bounds.
long long tail_bound(const Index& s, const PointTuple& u, long long n);

// Least cutoff whose certified tail reaches prec plus 10 guard digits.
long long polylog_cutoff(const Index& s, const PointTuple& u, long long prec);

// Shared factor jets for chain summation: (t - theta^(q^m))^(-e) and the
// inverse powers of the deformed products LL_i, all as jets at t = theta
// with relative-precision floor rel.  Grow-on-demand; warm single-threaded.
class PolylogCache {
public:
  explicit PolylogCache(const FqCtx& F) : F_(&F) {}
  const FqCtx& field() const { return *F_; }

  Jet<LaurentNumber> geometric(int m, long long e, int len, long long rel);
  Jet<LaurentNumber> ll_inverse_pow(int i, int e, int len, long long rel);

private:
  struct Entry {
    int len = 0;
    long long rel = 0;
    std::vector<Jet<LaurentNumber>> jets;  // singleton holder
  };
  const FqCtx* F_;
  std::map<std::pair<long long, long long>, Entry> geo_, llpow_;
};

// Partial chain sum of prod_k u_k^(q^(i_k)) / LL_(i_k)^(s_k) as a jet at
// t = theta: value coefficient j is the order-j divided-power t-derivative
// of the partial sum, evaluated at t = theta.  The sum runs over the star
// (i_1 >= ... >= i_r >= 0) or strict (i_1 > ... > i_r >= 0) region with
// i_1 <= cutoff; every omitted jet coefficient has ord_inf >= tail_ord.
struct PolylogJet {
  Index s;
  PointTuple u;
  bool star;
  long long cutoff;
  long long tail_ord;
  Jet<LaurentNumber> value;
};

PolylogJet cmspl_jet(PolylogCache& PC, const Index& s, const PointTuple& u,
                     int len, long long prec);
PolylogJet cmpl_jet(PolylogCache& PC, const Index& s, const PointTuple& u,
                    int len, long long prec);

// Exact partial sums over the same regions with an explicit cutoff; oracle
// path for small instances.
Jet<RatFunc> cmspl_jet_exact(const Index& s, const PointTuple& u, int len,
                             long long cutoff);
Jet<RatFunc> cmpl_jet_exact(const Index& s, const PointTuple& u, int len,
                            long long cutoff);

}  // namespace cmzv
