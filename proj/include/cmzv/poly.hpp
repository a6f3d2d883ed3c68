#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cmzv/field.hpp"

namespace cmzv {

enum class Var : uint8_t { theta = 0, t = 1 };

inline const char* var_name(Var v) { return v == Var::theta ? "theta" : "t"; }

// Dense univariate polynomial over F_q with a variable tag.  Coefficients
// ascending, trimmed; deg(0) = -1.
class UniPoly {
public:
  UniPoly(const FqCtx& F, Var v) : F_(&F), var_(v) {}
  UniPoly(const FqCtx& F, Var v, std::vector<uint16_t> coeffs)
      : F_(&F), var_(v), c_(std::move(coeffs)) {
    trim();
  }

  static UniPoly zero(const FqCtx& F, Var v) { return UniPoly(F, v); }
  static UniPoly constant(const FqCtx& F, Var v, uint16_t a) {
    return UniPoly(F, v, {a});
  }
  static UniPoly one(const FqCtx& F, Var v) { return constant(F, v, 1); }
  // a * x^k
  static UniPoly monomial(const FqCtx& F, Var v, uint16_t a, long long k);

  const FqCtx& field() const { return *F_; }
  Var var() const { return var_; }
  int deg() const { return int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  uint16_t coeff(long long i) const {
    return (i >= 0 && i < (long long)c_.size()) ? c_[size_t(i)] : 0;
  }
  uint16_t leading() const { return c_.empty() ? 0 : c_.back(); }
  const std::vector<uint16_t>& coeffs() const { return c_; }

  UniPoly operator-() const;
  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly scaled(uint16_t a) const;
  UniPoly shifted(long long k) const;  // * x^k, k >= 0
  UniPoly pow(long long n) const;

  // Quotient and remainder; divisor must be nonzero.
  void divrem(const UniPoly& den, UniPoly& quo, UniPoly& rem) const;
  UniPoly operator/(const UniPoly& den) const;
  UniPoly operator%(const UniPoly& den) const;
  // Division asserting zero remainder.
  UniPoly exact_div(const UniPoly& den) const;

  UniPoly monic() const;
  static UniPoly gcd(const UniPoly& a, const UniPoly& b);  // monic normal form

  // Frobenius twist f -> f^(q^n): F_q coefficients are fixed, so the twist
  // reindexes degree i to i*q^n.  Requires n >= 0.
  UniPoly twist(int n) const;

  // Reinterpret the same coefficients in the other variable (theta <-> t).
  UniPoly with_var(Var v) const { return UniPoly(*F_, v, c_); }

  uint16_t eval(uint16_t x) const;

  bool operator==(const UniPoly& o) const {
    return var_ == o.var_ && c_ == o.c_ && F_->same(*o.F_);
  }
  bool operator!=(const UniPoly& o) const { return !(*this == o); }

  std::string to_string() const;

private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  const FqCtx* F_;
  Var var_;
  std::vector<uint16_t> c_;
};

// Polynomial in t with coefficients in F_q[theta]; the canonical carrier for
// F_q[t] (theta-degree 0) and for A[t].  Entries indexed by t-degree.
class BiPoly {
public:
  explicit BiPoly(const FqCtx& F) : F_(&F) {}
  BiPoly(const FqCtx& F, std::vector<UniPoly> ct) : F_(&F), c_(std::move(ct)) { trim(); }

  static BiPoly zero(const FqCtx& F) { return BiPoly(F); }
  static BiPoly one(const FqCtx& F) {
    return BiPoly(F, {UniPoly::one(F, Var::theta)});
  }
  // Embed a coefficient polynomial in theta (t-degree 0).
  static BiPoly from_theta(const UniPoly& a);
  // Embed an element of F_q[t].
  static BiPoly from_t(const UniPoly& b);
  // theta^a * t^b
  static BiPoly monomial(const FqCtx& F, uint16_t coef, long long dtheta, long long dt);

  const FqCtx& field() const { return *F_; }
  int deg_t() const { return int(c_.size()) - 1; }
  int deg_theta() const;
  bool is_zero() const { return c_.empty(); }
  UniPoly coeff_t(long long i) const;
  const std::vector<UniPoly>& coeffs() const { return c_; }

  BiPoly operator-() const;
  BiPoly operator+(const BiPoly& o) const;
  BiPoly operator-(const BiPoly& o) const;
  BiPoly operator*(const BiPoly& o) const;
  BiPoly scaled(uint16_t a) const;
  BiPoly pow(long long n) const;

  // Frobenius twist: q^n-th power on the theta-coefficients, t untouched.
  BiPoly twist(int n) const;

  // Hyperderivative in t of order n: t^k -> C(k, n) t^(k-n).
  BiPoly hyperderivative(long long n) const;

  // Substitute t = theta.
  UniPoly eval_t_theta() const;

  // Divide by a polynomial in F_q[t] (theta-degree 0 coefficients); remainder
  // must vanish, otherwise throws.
  BiPoly exact_div_t(const UniPoly& den_t) const;

  // Gauss norm exponents: log_q ||.||_1 = max_i deg coeff_i,
  // log_q ||.||_theta = max_i (deg coeff_i + i).  Returns false for zero.
  bool norm1_exp(long long& e) const;
  bool norm_theta_exp(long long& e) const;

  bool operator==(const BiPoly& o) const { return c_ == o.c_ && F_->same(*o.F_); }
  bool operator!=(const BiPoly& o) const { return !(*this == o); }

  std::string to_string() const;

private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  const FqCtx* F_;
  std::vector<UniPoly> c_;
};

}  // namespace cmzv
