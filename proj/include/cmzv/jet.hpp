#pragma once

#include <stdexcept>
#include <vector>

#include "cmzv/binom.hpp"
#include "cmzv/laurent.hpp"
#include "cmzv/ratfunc.hpp"

namespace cmzv {

// Truncated expansion at t = theta: f = sum_j coeff(j) * (t - theta)^j up to
// (t - theta)^len.  C is an exact coefficient type (RatFunc) or a certified
// numeric one (LaurentNumber); both expose +, -, *, scaled(uint16_t), inv(),
// field().
template <class C>
class Jet {
public:
  explicit Jet(std::vector<C> c) : c_(std::move(c)) {
    if (c_.empty()) throw std::logic_error("empty jet");
  }
  static Jet zero(const C& zero_elt, int len) {
    return Jet(std::vector<C>(size_t(len), zero_elt));
  }

  int len() const { return int(c_.size()); }
  const C& coeff(int j) const { return c_.at(size_t(j)); }
  const std::vector<C>& coeffs() const { return c_; }
  const FqCtx& field() const { return c_[0].field(); }

  Jet operator-() const {
    std::vector<C> r;
    r.reserve(c_.size());
    for (const C& x : c_) r.push_back(-x);
    return Jet(std::move(r));
  }
  Jet operator+(const Jet& o) const {
    require_same_len(o);
    std::vector<C> r;
    r.reserve(c_.size());
    for (size_t j = 0; j < c_.size(); ++j) r.push_back(c_[j] + o.c_[j]);
    return Jet(std::move(r));
  }
  Jet operator-(const Jet& o) const { return *this + (-o); }
  // Truncated product; the shorter order wins.
  Jet operator*(const Jet& o) const {
    size_t n = std::min(c_.size(), o.c_.size());
    std::vector<C> r;
    r.reserve(n);
    for (size_t k = 0; k < n; ++k) {
      C acc = c_[0] * o.c_[k];
      for (size_t i = 1; i <= k; ++i) acc = acc + c_[i] * o.c_[k - i];
      r.push_back(std::move(acc));
    }
    return Jet(std::move(r));
  }
  Jet scaled(uint16_t a) const {
    std::vector<C> r;
    r.reserve(c_.size());
    for (const C& x : c_) r.push_back(x.scaled(a));
    return Jet(std::move(r));
  }
  Jet scaled_by(const C& s) const {
    std::vector<C> r;
    r.reserve(c_.size());
    for (const C& x : c_) r.push_back(x * s);
    return Jet(std::move(r));
  }
  // Series inverse; coeff(0) must be invertible.
  Jet inv() const {
    C c0 = c_[0].inv();
    std::vector<C> r;
    r.reserve(c_.size());
    r.push_back(c0);
    for (size_t n = 1; n < c_.size(); ++n) {
      C acc = c_[1] * r[n - 1];
      for (size_t i = 2; i <= n; ++i) acc = acc + c_[i] * r[n - i];
      r.push_back(-(c0 * acc));
    }
    return Jet(std::move(r));
  }
  // Divided-power derivative in t of order n: coefficient j of the result is
  // C(n + j, n) * coeff(n + j).  Result keeps len - n coefficients.
  Jet hyperderivative(int n) const {
    if (n < 0 || n >= len()) throw std::logic_error("jet derivative order out of range");
    if (n == 0) return *this;
    const FqCtx& F = field();
    std::vector<C> r;
    r.reserve(c_.size() - size_t(n));
    for (size_t j = 0; j + size_t(n) < c_.size(); ++j)
      r.push_back(c_[j + size_t(n)].scaled(binom_fq(F, (long long)j + n, n)));
    return Jet(std::move(r));
  }
  Jet truncated(int new_len) const {
    if (new_len <= 0 || new_len > len()) throw std::logic_error("bad jet truncation");
    return Jet(std::vector<C>(c_.begin(), c_.begin() + new_len));
  }

  bool operator==(const Jet& o) const { return c_ == o.c_; }
  bool operator!=(const Jet& o) const { return !(*this == o); }

private:
  void require_same_len(const Jet& o) const {
    if (c_.size() != o.c_.size()) throw std::logic_error("jet length mismatch");
  }
  std::vector<C> c_;
};

// Exact jet of a polynomial in t and theta: coefficient j is the order-j
// divided-power t-derivative evaluated at t = theta.
Jet<RatFunc> jet_from_bipoly(const BiPoly& f, int len);

Jet<LaurentNumber> jet_to_laurent(const Jet<RatFunc>& j, long long prec);

// Jet of (t - theta^(q^m))^(-e): coefficient j is
// (-1)^j * C(e-1+j, j) / (theta - theta^(q^m))^(e+j).
Jet<RatFunc> geometric_jet_exact(const FqCtx& F, int m, long long e, int len);
Jet<LaurentNumber> geometric_jet(const FqCtx& F, int m, long long e, int len,
                                 long long prec);

}  // namespace cmzv
