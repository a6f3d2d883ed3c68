#pragma once

#include <climits>
#include <cstdint>
#include <string>
#include <vector>

#include "cmzv/ratfunc.hpp"

namespace cmzv {

// Truncated Laurent series at the infinite place: x = sum_k c_k theta^(-k),
// digits stored ascending from ord.  prec means every digit at index < prec
// is known (absent ones are known zeros); kExactPrec marks a finite, exact
// expansion.  Every operation propagates the provable precision, so a final
// result certifies its own digit window.
class LaurentNumber {
public:
  static constexpr long long kExactPrec = LLONG_MAX;

  static LaurentNumber exact_zero(const FqCtx& F) {
    return LaurentNumber(F, kExactPrec, kExactPrec, {});
  }
  static LaurentNumber zero_to(const FqCtx& F, long long prec) {
    return LaurentNumber(F, prec, prec, {});
  }
  static LaurentNumber one(const FqCtx& F) {
    return LaurentNumber(F, 0, kExactPrec, {1});
  }
  // theta^n (any sign of n), exact.
  static LaurentNumber theta_pow(const FqCtx& F, long long n) {
    return LaurentNumber(F, -n, kExactPrec, {1});
  }
  static LaurentNumber from_digits(const FqCtx& F, long long ord,
                                   std::vector<uint16_t> digits, long long prec);
  // Exact image of a polynomial in theta.
  static LaurentNumber from_unipoly(const UniPoly& f);

  const FqCtx& field() const { return *F_; }
  // Valuation lower bound: index of the first stored digit.  For a value with
  // no known nonzero digit this equals prec (kExactPrec for the exact zero).
  long long ord() const { return ord_; }
  long long prec() const { return prec_; }
  bool is_exact() const { return prec_ == kExactPrec; }
  // True when no nonzero digit is known (exact zero or zero-to-precision).
  bool is_zero() const { return digits_.empty(); }
  const std::vector<uint16_t>& digits() const { return digits_; }
  // Digit at index k; only meaningful for k < prec.
  uint16_t digit(long long k) const {
    long long i = k - ord_;
    return (i >= 0 && i < (long long)digits_.size()) ? digits_[size_t(i)] : 0;
  }

  LaurentNumber operator-() const;
  LaurentNumber operator+(const LaurentNumber& o) const;
  LaurentNumber operator-(const LaurentNumber& o) const;
  LaurentNumber operator*(const LaurentNumber& o) const;
  LaurentNumber scaled(uint16_t a) const;
  // Multiply by theta^n (exact shift of the digit window).
  LaurentNumber times_theta_pow(long long n) const;
  // Series inverse.  The relative precision (prec - ord) carries over, so the
  // result precision is prec - 2*ord.  An exact multi-digit input must be
  // truncated first; a value with no known leading digit has no inverse.
  LaurentNumber inv() const;
  LaurentNumber operator/(const LaurentNumber& o) const { return *this * o.inv(); }
  LaurentNumber pow(long long n) const;  // n >= 0

  // Cap the known window at new_prec (digits at index >= new_prec dropped).
  LaurentNumber truncate(long long new_prec) const;

  // q^n-th power.  F_q digits are Frobenius-fixed, so digit index k moves to
  // k*q^n and both ord and prec scale by q^n exactly.
  LaurentNumber frobenius_power(int n) const;
  // Same map but materializing only digits below cap; the result precision is
  // min(prec*q^n, cap).  Keeps windows linear when ord is large.
  LaurentNumber frobenius_truncated(int n, long long cap) const;

  // Structural equality (same window, same digits).
  bool operator==(const LaurentNumber& o) const {
    return ord_ == o.ord_ && prec_ == o.prec_ && digits_ == o.digits_ &&
           F_->same(*o.F_);
  }
  bool operator!=(const LaurentNumber& o) const { return !(*this == o); }

  std::string to_string() const;

private:
  LaurentNumber(const FqCtx& F, long long ord, long long prec,
                std::vector<uint16_t> digits)
      : F_(&F), ord_(ord), prec_(prec), digits_(std::move(digits)) {
    normalize();
  }
  void normalize();

  const FqCtx* F_;
  long long ord_;
  long long prec_;
  std::vector<uint16_t> digits_;
};

// Saturating precision add: an exact operand never limits the result.
inline long long prec_add(long long a, long long b) {
  if (a == LaurentNumber::kExactPrec || b == LaurentNumber::kExactPrec)
    return LaurentNumber::kExactPrec;
  return a + b;
}

// Largest bound through which a and b are both known and digit-identical;
// never exceeds min(a.prec, b.prec).
long long agreement_prec(const LaurentNumber& a, const LaurentNumber& b);

inline bool agrees_through(const LaurentNumber& a, const LaurentNumber& b,
                           long long through) {
  return agreement_prec(a, b) >= through;
}

// Expansion of a rational function at the infinite place, truncated to prec.
LaurentNumber laurent_from_ratfunc(const RatFunc& r, long long prec);

// Expansion of num/den without canonicalizing the fraction first; only the
// top prec window of the quotient is ever materialized, so large common
// factors in num and den cost nothing.
LaurentNumber laurent_from_quotient(const UniPoly& num, const UniPoly& den,
                                    long long prec);

}  // namespace cmzv
