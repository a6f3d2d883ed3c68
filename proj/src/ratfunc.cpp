#include "cmzv/ratfunc.hpp"

#include <stdexcept>

namespace cmzv {

RatFunc::RatFunc(const UniPoly& num)
    : num_(num), den_(UniPoly::one(num.field(), num.var())) {}

RatFunc::RatFunc(const UniPoly& num, const UniPoly& den) : num_(num), den_(den) {
  if (num_.var() != den_.var()) throw std::invalid_argument("mixed-variable rational function");
  canonicalize();
}

void RatFunc::canonicalize() {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = UniPoly::one(num_.field(), num_.var());
    return;
  }
  UniPoly g = UniPoly::gcd(num_, den_);
  if (g.deg() > 0) {
    num_ = num_.exact_div(g);
    den_ = den_.exact_div(g);
  }
  uint16_t lead = den_.leading();
  if (lead != 1) {
    uint16_t il = field().inv(lead);
    num_ = num_.scaled(il);
    den_ = den_.scaled(il);
  }
}

long long RatFunc::ord_inf() const {
  if (is_zero()) throw std::domain_error("ord_inf of zero");
  return den_.deg() - num_.deg();
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_, true); }

RatFunc RatFunc::operator+(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const { return *this * o.inv(); }

RatFunc RatFunc::inv() const {
  if (is_zero()) throw std::domain_error("inverse of zero rational function");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::scaled(uint16_t a) const { return RatFunc(num_.scaled(a), den_, true); }

RatFunc RatFunc::pow(long long n) const {
  if (n < 0) return inv().pow(-n);
  RatFunc acc = one(field(), var()), b = *this;
  while (n > 0) {
    if (n & 1) acc = acc * b;
    if (n >>= 1) b = b * b;
  }
  return acc;
}

RatFunc RatFunc::twist(int n) const {
  // canonical form survives the twist: gcd(f,g)=1 implies gcd(f^(n),g^(n))=1
  // and monic denominators stay monic.
  return RatFunc(num_.twist(n), den_.twist(n), true);
}

std::string RatFunc::to_string() const {
  if (is_poly()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

}  // namespace cmzv
