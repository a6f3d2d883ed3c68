#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cmzv/laurent.hpp"
#include "cmzv/poly.hpp"
#include "cmzv/ratfunc.hpp"

namespace cmzv {

// Certified-order arithmetic saturates here; every realistic precision
// target sits far below, and past this point bounds only grow.
inline constexpr long long kOrdCap = 1LL << 38;

inline long long sat_add(long long a, long long b) {
  long long s = a + b;
  return s > kOrdCap ? kOrdCap : (s < -kOrdCap ? -kOrdCap : s);
}

// q^d, or kOrdCap once it can no longer matter.
inline long long sat_qpow(int q, long long d) {
  long long v = 1;
  for (long long k = 0; k < d; ++k) {
    if (v > kOrdCap / q) return kOrdCap;
    v *= q;
  }
  return v;
}

// Composition index s = (s_1, ..., s_r) with every entry >= 1.
class Index {
public:
  explicit Index(std::vector<int> parts);

  int depth() const { return int(parts_.size()); }
  int weight() const;
  // s_i, 1-based as in the defining sums.
  int at(int i) const { return parts_.at(size_t(i) - 1); }
  const std::vector<int>& parts() const { return parts_; }
  // d_i = s_i + ... + s_r, 1-based; d_{r+1} = 0.
  int block_dim(int i) const;
  // d_1 + ... + d_r, the total block dimension.
  int total_dim() const;
  Index reversed() const;
  // (s_i, ..., s_r), 1-based.
  Index suffix(int i) const;

  bool operator==(const Index& o) const { return parts_ == o.parts_; }
  bool operator!=(const Index& o) const { return !(*this == o); }
  std::string to_string() const;  // comma-separated entries

private:
  std::vector<int> parts_;
};

// Memoized classical elements over a fixed F_q: the products D_i and L_i, the
// deformation factors of L_i in the t-variable, Carlitz factorials, and the
// coefficient polynomials H_n from the generating identity
//   (1 - sum_i G_i(theta)/(D_i|_{theta=t}) x^(q^i))^(-1)
//     = sum_n H_n(t)/(Gamma_{n+1}|_{theta=t}) x^n.
// Accessors fill the memo tables on demand; warm the cache single-threaded
// before any concurrent reads.
class SpecialCache {
public:
  explicit SpecialCache(const FqCtx& F);

  const FqCtx& field() const { return *F_; }

  const UniPoly& D(int i);  // in theta
  const UniPoly& L(int i);  // in theta
  // deg L_d = q + q^2 + ... + q^d, computed arithmetically (saturating) so
  // certificates never materialize the polynomial.
  long long L_degree(int d) const;
  // Deformation of L_i: the product of (t - theta^(q^m)) for m = 1..i, kept
  // as the list of Frobenius exponents m.
  std::vector<int> L_deformation_exponents(int i) const;
  BiPoly L_deformation(int i);  // expanded product, for identity checks

  // Carlitz factorial Gamma_n = prod D_i^(n_i), digits from n-1 base q; n >= 1.
  const UniPoly& gamma(int n);
  UniPoly gamma_t(int n);  // same element with theta renamed to t
  // Product of gamma over the entries of an index.
  UniPoly gamma_index(const Index& s);

  // H_n as a polynomial in t over F_q[theta]; the generating-identity
  // recursion tracks a common denominator in F_q[t] and the final division
  // must be exact, otherwise this throws.
  const BiPoly& H(int n);

  // max over nonzero coefficients u_j t^j of H_{s-1} of q^d * deg u_j + j:
  // an upper bound for deg_theta of H_{s-1}^(d) evaluated at t = theta.
  long long h_twist_degree(int s, int d);

  // Certified lower bound for ord_inf of the degree-d power sum S_d(s).
  // Combines the coarse term-by-term bound s*d with the valuation of the
  // interpolation quotient H_{s-1}^(d)(theta) / (Gamma_s L_d^s); both are
  // sound and the maximum is increasing in d.
  long long power_sum_ord(int d, int s);

private:
  const FqCtx* F_;
  std::vector<UniPoly> d_, l_, gamma_;
  std::vector<BiPoly> h_num_;    // running numerators of H_n/Gamma-tilde_{n+1}
  std::vector<UniPoly> h_den_;   // matching denominators in F_q[t]
  std::vector<BiPoly> h_;
};

enum class PowerSumMode { brute, interp };

// S_d(s) = sum of 1/a^s over the q^d monic polynomials a of degree d, exact
// in K.  brute enumerates; interp returns H_{s-1}^(d)(theta)/(Gamma_s L_d^s).
RatFunc power_sum(SpecialCache& C, int d, int s, PowerSumMode mode);

// Same value expanded at the infinite place to precision prec; brute mode
// sums expansions termwise so no exact common denominator is ever built.
LaurentNumber power_sum_laurent(SpecialCache& C, int d, int s, long long prec,
                                PowerSumMode mode);

// Monic polynomials of degree d in theta, lexicographic by coefficient
// vector with the constant coefficient moving fastest.
void for_each_monic(const FqCtx& F, int d,
                    const std::function<void(const UniPoly&)>& fn);

// Certified ord lower bound for every term omitted when the zeta sum is
// capped at d_1 <= Dmax.
long long zeta_tail_ord(SpecialCache& C, const Index& s, int Dmax);

// Least cap whose omitted tail is certified at or beyond prec plus a fixed
// guard of 10 digits.
int zeta_degree_cutoff(SpecialCache& C, const Index& s, long long prec);

// Direct multiple zeta sum over d_1 > ... > d_r >= 0 with d_1 <= Dmax of
// prod S_{d_i}(s_i); the returned precision is min(prec, zeta_tail_ord).
LaurentNumber zeta_bruteforce(SpecialCache& C, const Index& s, int Dmax,
                              long long prec);

}  // namespace cmzv
