#pragma once

#include <string>

#include "cmzv/poly.hpp"

namespace cmzv {

// Element of F_q(x) in canonical form: denominator monic, gcd(num, den) = 1,
// zero represented as 0/1.  Canonical form is unique, so == is bitwise.
class RatFunc {
public:
  explicit RatFunc(const UniPoly& num);
  RatFunc(const UniPoly& num, const UniPoly& den);

  static RatFunc zero(const FqCtx& F, Var v) { return RatFunc(UniPoly::zero(F, v)); }
  static RatFunc one(const FqCtx& F, Var v) { return RatFunc(UniPoly::one(F, v)); }
  static RatFunc constant(const FqCtx& F, Var v, uint16_t a) {
    return RatFunc(UniPoly::constant(F, v, a));
  }

  const FqCtx& field() const { return num_.field(); }
  Var var() const { return num_.var(); }
  const UniPoly& num() const { return num_; }
  const UniPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_poly() const { return den_.is_one(); }

  // Valuation at 1/x: ord = deg den - deg num.  Throws on zero.
  long long ord_inf() const;

  RatFunc operator-() const;
  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc inv() const;
  RatFunc scaled(uint16_t a) const;
  RatFunc pow(long long n) const;  // n may be negative
  RatFunc twist(int n) const;      // q^n-th power Frobenius, n >= 0

  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

  std::string to_string() const;

private:
  RatFunc(UniPoly num, UniPoly den, bool /*already_canonical*/)
      : num_(std::move(num)), den_(std::move(den)) {}
  void canonicalize();

  UniPoly num_, den_;
};

}  // namespace cmzv
