#include "cmzv/poly.hpp"

#include <stdexcept>

#include "cmzv/binom.hpp"

namespace cmzv {

namespace {

constexpr size_t kKaratsubaThreshold = 96;

// Schoolbook product on raw coefficient spans.
void mul_school(const FqCtx& F, const uint16_t* a, size_t na, const uint16_t* b,
                size_t nb, uint16_t* out) {
  for (size_t i = 0; i < na; ++i) {
    uint16_t ai = a[i];
    if (ai == 0) continue;
    for (size_t j = 0; j < nb; ++j) {
      if (b[j] == 0) continue;
      out[i + j] = F.add(out[i + j], F.mul(ai, b[j]));
    }
  }
}

// out (length na+nb-1, zero-initialized) += a * b, splitting at half sizes.
void mul_rec(const FqCtx& F, const uint16_t* a, size_t na, const uint16_t* b,
             size_t nb, uint16_t* out) {
  if (na == 0 || nb == 0) return;
  if (na < kKaratsubaThreshold || nb < kKaratsubaThreshold) {
    mul_school(F, a, na, b, nb, out);
    return;
  }
  size_t h = (std::max(na, nb) + 1) / 2;
  if (na <= h) {
    // b splits only
    mul_rec(F, a, na, b, h, out);
    mul_rec(F, a, na, b + h, nb - h, out + h);
    return;
  }
  if (nb <= h) {
    mul_rec(F, a, h, b, nb, out);
    mul_rec(F, a + h, na - h, b, nb, out + h);
    return;
  }
  size_t na0 = h, na1 = na - h, nb0 = h, nb1 = nb - h;
  // z0 = a0 b0, z2 = a1 b1, z1 = (a0 + a1)(b0 + b1) - z0 - z2
  std::vector<uint16_t> z0(na0 + nb0 - 1, 0), z2(na1 + nb1 - 1, 0);
  mul_rec(F, a, na0, b, nb0, z0.data());
  mul_rec(F, a + h, na1, b + h, nb1, z2.data());
  size_t ns = std::max(na0, na1), ms = std::max(nb0, nb1);
  std::vector<uint16_t> sa(ns, 0), sb(ms, 0);
  for (size_t i = 0; i < na0; ++i) sa[i] = a[i];
  for (size_t i = 0; i < na1; ++i) sa[i] = F.add(sa[i], a[h + i]);
  for (size_t i = 0; i < nb0; ++i) sb[i] = b[i];
  for (size_t i = 0; i < nb1; ++i) sb[i] = F.add(sb[i], b[h + i]);
  std::vector<uint16_t> z1(ns + ms - 1, 0);
  mul_rec(F, sa.data(), ns, sb.data(), ms, z1.data());
  for (size_t i = 0; i < z0.size(); ++i) z1[i] = F.sub(z1[i], z0[i]);
  for (size_t i = 0; i < z2.size(); ++i) z1[i] = F.sub(z1[i], z2[i]);
  for (size_t i = 0; i < z0.size(); ++i) out[i] = F.add(out[i], z0[i]);
  for (size_t i = 0; i < z1.size(); ++i) out[h + i] = F.add(out[h + i], z1[i]);
  for (size_t i = 0; i < z2.size(); ++i) out[2 * h + i] = F.add(out[2 * h + i], z2[i]);
}

}  // namespace

UniPoly UniPoly::monomial(const FqCtx& F, Var v, uint16_t a, long long k) {
  if (a == 0) return zero(F, v);
  if (k < 0) throw std::invalid_argument("monomial degree must be >= 0");
  std::vector<uint16_t> c(size_t(k) + 1, 0);
  c.back() = a;
  return UniPoly(F, v, std::move(c));
}

UniPoly UniPoly::operator-() const {
  UniPoly r = *this;
  for (auto& x : r.c_) x = F_->neg(x);
  return r;
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  UniPoly r(*F_, var_);
  r.c_.resize(std::max(c_.size(), o.c_.size()), 0);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r.c_[i] = F_->add(r.c_[i], o.c_[i]);
  r.trim();
  return r;
}

UniPoly UniPoly::operator-(const UniPoly& o) const {
  UniPoly r(*F_, var_);
  r.c_.resize(std::max(c_.size(), o.c_.size()), 0);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r.c_[i] = F_->sub(r.c_[i], o.c_[i]);
  r.trim();
  return r;
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (is_zero() || o.is_zero()) return zero(*F_, var_);
  UniPoly r(*F_, var_);
  r.c_.assign(c_.size() + o.c_.size() - 1, 0);
  mul_rec(*F_, c_.data(), c_.size(), o.c_.data(), o.c_.size(), r.c_.data());
  r.trim();
  return r;
}

UniPoly UniPoly::scaled(uint16_t a) const {
  if (a == 0) return zero(*F_, var_);
  UniPoly r = *this;
  if (a == 1) return r;
  for (auto& x : r.c_) x = F_->mul(x, a);
  return r;
}

UniPoly UniPoly::shifted(long long k) const {
  if (k < 0) throw std::invalid_argument("shift must be >= 0");
  if (is_zero()) return *this;
  UniPoly r(*F_, var_);
  r.c_.assign(size_t(k), 0);
  r.c_.insert(r.c_.end(), c_.begin(), c_.end());
  return r;
}

UniPoly UniPoly::pow(long long n) const {
  if (n < 0) throw std::invalid_argument("negative power of a polynomial");
  UniPoly acc = one(*F_, var_), b = *this;
  while (n > 0) {
    if (n & 1) acc = acc * b;
    if (n >>= 1) b = b * b;
  }
  return acc;
}

void UniPoly::divrem(const UniPoly& den, UniPoly& quo, UniPoly& rem) const {
  if (den.is_zero()) throw std::domain_error("polynomial division by zero");
  quo = zero(*F_, var_);
  rem = *this;
  int dd = den.deg();
  uint16_t ilead = F_->inv(den.leading());
  if (rem.deg() >= dd) quo.c_.assign(size_t(rem.deg() - dd) + 1, 0);
  while (rem.deg() >= dd) {
    int k = rem.deg() - dd;
    uint16_t c = F_->mul(rem.leading(), ilead);
    quo.c_[size_t(k)] = c;
    for (int i = 0; i <= dd; ++i)
      rem.c_[size_t(k + i)] = F_->sub(rem.c_[size_t(k + i)], F_->mul(c, den.c_[size_t(i)]));
    rem.trim();
  }
  quo.trim();
}

UniPoly UniPoly::operator/(const UniPoly& den) const {
  UniPoly q(*F_, var_), r(*F_, var_);
  divrem(den, q, r);
  return q;
}

UniPoly UniPoly::operator%(const UniPoly& den) const {
  UniPoly q(*F_, var_), r(*F_, var_);
  divrem(den, q, r);
  return r;
}

UniPoly UniPoly::exact_div(const UniPoly& den) const {
  UniPoly q(*F_, var_), r(*F_, var_);
  divrem(den, q, r);
  if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
  return q;
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(F_->inv(leading()));
}

UniPoly UniPoly::gcd(const UniPoly& a, const UniPoly& b) {
  UniPoly x = a, y = b;
  while (!y.is_zero()) {
    UniPoly r = x % y;
    x = y;
    y = r;
  }
  return x.monic();
}

UniPoly UniPoly::twist(int n) const {
  if (n < 0) throw std::invalid_argument("negative Frobenius twist is never materialized");
  if (n == 0 || is_zero()) return *this;
  long long step = 1;
  for (int i = 0; i < n; ++i) step *= F_->q();
  UniPoly r(*F_, var_);
  r.c_.assign(size_t(deg()) * step + 1, 0);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i * step] = c_[i];
  return r;
}

uint16_t UniPoly::eval(uint16_t x) const {
  uint16_t acc = 0;
  for (size_t i = c_.size(); i-- > 0;) acc = F_->add(F_->mul(acc, x), c_[i]);
  return acc;
}

std::string UniPoly::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  for (size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    if (!s.empty()) s += " + ";
    if (c_[i] != 1 || i == 0) s += std::to_string(c_[i]);
    if (i > 0) {
      if (c_[i] != 1) s += "*";
      s += var_name(var_);
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

BiPoly BiPoly::from_theta(const UniPoly& a) {
  if (a.var() != Var::theta) throw std::invalid_argument("expected a theta-polynomial");
  return BiPoly(a.field(), {a});
}

BiPoly BiPoly::from_t(const UniPoly& b) {
  if (b.var() != Var::t) throw std::invalid_argument("expected a t-polynomial");
  std::vector<UniPoly> ct;
  ct.reserve(size_t(b.deg() + 1));
  for (int i = 0; i <= b.deg(); ++i)
    ct.push_back(UniPoly::constant(b.field(), Var::theta, b.coeff(i)));
  return BiPoly(b.field(), std::move(ct));
}

BiPoly BiPoly::monomial(const FqCtx& F, uint16_t coef, long long dtheta, long long dt) {
  if (coef == 0) return zero(F);
  std::vector<UniPoly> ct(size_t(dt) + 1, UniPoly::zero(F, Var::theta));
  ct.back() = UniPoly::monomial(F, Var::theta, coef, dtheta);
  return BiPoly(F, std::move(ct));
}

int BiPoly::deg_theta() const {
  int d = -1;
  for (const auto& a : c_) d = std::max(d, a.deg());
  return d;
}

UniPoly BiPoly::coeff_t(long long i) const {
  if (i >= 0 && i < (long long)c_.size()) return c_[size_t(i)];
  return UniPoly::zero(*F_, Var::theta);
}

BiPoly BiPoly::operator-() const {
  BiPoly r = *this;
  for (auto& a : r.c_) a = -a;
  return r;
}

BiPoly BiPoly::operator+(const BiPoly& o) const {
  BiPoly r(*F_);
  r.c_.resize(std::max(c_.size(), o.c_.size()), UniPoly::zero(*F_, Var::theta));
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r.c_[i] = r.c_[i] + o.c_[i];
  r.trim();
  return r;
}

BiPoly BiPoly::operator-(const BiPoly& o) const { return *this + (-o); }

BiPoly BiPoly::operator*(const BiPoly& o) const {
  if (is_zero() || o.is_zero()) return zero(*F_);
  BiPoly r(*F_);
  r.c_.assign(c_.size() + o.c_.size() - 1, UniPoly::zero(*F_, Var::theta));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) {
      if (o.c_[j].is_zero()) continue;
      r.c_[i + j] = r.c_[i + j] + c_[i] * o.c_[j];
    }
  }
  r.trim();
  return r;
}

BiPoly BiPoly::scaled(uint16_t a) const {
  BiPoly r = *this;
  for (auto& x : r.c_) x = x.scaled(a);
  r.trim();
  return r;
}

BiPoly BiPoly::pow(long long n) const {
  if (n < 0) throw std::invalid_argument("negative power of a polynomial");
  BiPoly acc = one(*F_), b = *this;
  while (n > 0) {
    if (n & 1) acc = acc * b;
    if (n >>= 1) b = b * b;
  }
  return acc;
}

BiPoly BiPoly::twist(int n) const {
  BiPoly r = *this;
  for (auto& a : r.c_) a = a.twist(n);
  return r;
}

BiPoly BiPoly::hyperderivative(long long n) const {
  if (n < 0) throw std::invalid_argument("hyperderivative order must be >= 0");
  if (n == 0) return *this;
  BiPoly r(*F_);
  if ((long long)c_.size() <= n) return r;
  r.c_.reserve(c_.size() - size_t(n));
  for (size_t k = size_t(n); k < c_.size(); ++k)
    r.c_.push_back(c_[k].scaled(binom_fq(*F_, (long long)k, n)));
  r.trim();
  return r;
}

UniPoly BiPoly::eval_t_theta() const {
  UniPoly acc = UniPoly::zero(*F_, Var::theta);
  for (size_t i = c_.size(); i-- > 0;) {
    acc = acc.shifted(1) + c_[i];  // Horner in t = theta
  }
  return acc;
}

BiPoly BiPoly::exact_div_t(const UniPoly& den_t) const {
  if (den_t.var() != Var::t) throw std::invalid_argument("divisor must be a t-polynomial");
  if (den_t.is_zero()) throw std::domain_error("division by zero");
  BiPoly rem = *this;
  int dd = den_t.deg();
  uint16_t ilead = F_->inv(den_t.leading());
  std::vector<UniPoly> quo;
  if (rem.deg_t() >= dd) quo.assign(size_t(rem.deg_t() - dd) + 1, UniPoly::zero(*F_, Var::theta));
  while (rem.deg_t() >= dd) {
    int k = rem.deg_t() - dd;
    UniPoly c = rem.c_.back().scaled(ilead);
    quo[size_t(k)] = c;
    for (int i = 0; i <= dd; ++i)
      rem.c_[size_t(k + i)] = rem.c_[size_t(k + i)] - c.scaled(den_t.coeff(i));
    rem.trim();
  }
  if (!rem.is_zero()) throw std::domain_error("inexact division by t-polynomial");
  return BiPoly(*F_, std::move(quo));
}

bool BiPoly::norm1_exp(long long& e) const {
  if (is_zero()) return false;
  e = deg_theta();
  return true;
}

bool BiPoly::norm_theta_exp(long long& e) const {
  if (is_zero()) return false;
  long long best = 0;
  bool any = false;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    long long v = c_[i].deg() + (long long)i;
    if (!any || v > best) best = v;
    any = true;
  }
  e = best;
  return any;
}

std::string BiPoly::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  for (size_t i = c_.size(); i-- > 0;) {
    if (c_[i].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + c_[i].to_string() + ")";
    if (i > 0) {
      s += "*t";
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

}  // namespace cmzv
