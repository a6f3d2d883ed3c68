#include "cmzv/laurent.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cmzv {

namespace {

// Index of the first stored digit, or kExactPrec when none is stored.
long long first_idx(const LaurentNumber& x) {
  return x.is_zero() ? LaurentNumber::kExactPrec : x.ord();
}

long long end_idx(const LaurentNumber& x) {
  return x.is_zero() ? LLONG_MIN : x.ord() + (long long)x.digits().size();
}

}  // namespace

void LaurentNumber::normalize() {
  if (prec_ != kExactPrec && !digits_.empty()) {
    long long keep = prec_ - ord_;
    if (keep <= 0)
      digits_.clear();
    else if ((long long)digits_.size() > keep)
      digits_.resize(size_t(keep));
  }
  size_t lead = 0;
  while (lead < digits_.size() && digits_[lead] == 0) ++lead;
  if (lead > 0) {
    digits_.erase(digits_.begin(), digits_.begin() + (long long)lead);
    ord_ += (long long)lead;
  }
  while (!digits_.empty() && digits_.back() == 0) digits_.pop_back();
  if (digits_.empty()) ord_ = prec_;
}

LaurentNumber LaurentNumber::from_digits(const FqCtx& F, long long ord,
                                         std::vector<uint16_t> digits,
                                         long long prec) {
  return LaurentNumber(F, ord, prec, std::move(digits));
}

LaurentNumber LaurentNumber::from_unipoly(const UniPoly& f) {
  if (f.var() != Var::theta)
    throw std::logic_error("laurent expansion needs a polynomial in theta");
  const FqCtx& F = f.field();
  if (f.is_zero()) return exact_zero(F);
  int d = f.deg();
  std::vector<uint16_t> digits(size_t(d) + 1);
  for (int i = 0; i <= d; ++i) digits[size_t(d - i)] = f.coeff(i);
  return LaurentNumber(F, -(long long)d, kExactPrec, std::move(digits));
}

LaurentNumber LaurentNumber::operator-() const {
  std::vector<uint16_t> d(digits_.size());
  for (size_t i = 0; i < digits_.size(); ++i) d[i] = F_->neg(digits_[i]);
  return LaurentNumber(*F_, ord_, prec_, std::move(d));
}

LaurentNumber LaurentNumber::operator+(const LaurentNumber& o) const {
  long long prec = std::min(prec_, o.prec_);
  long long lo = std::min(first_idx(*this), first_idx(o));
  long long hi = std::max(end_idx(*this), end_idx(o));
  if (prec != kExactPrec) hi = std::min(hi, prec);
  if (lo >= hi) return LaurentNumber(*F_, prec, prec, {});
  std::vector<uint16_t> d(size_t(hi - lo));
  for (long long k = lo; k < hi; ++k)
    d[size_t(k - lo)] = F_->add(digit(k), o.digit(k));
  return LaurentNumber(*F_, lo, prec, std::move(d));
}

LaurentNumber LaurentNumber::operator-(const LaurentNumber& o) const {
  return *this + (-o);
}

LaurentNumber LaurentNumber::operator*(const LaurentNumber& o) const {
  long long oa = is_zero() ? prec_ : ord_;
  long long ob = o.is_zero() ? o.prec_ : o.ord_;
  long long prec = std::min(prec_add(prec_, ob), prec_add(o.prec_, oa));
  if (digits_.empty() || o.digits_.empty())
    return LaurentNumber(*F_, prec, prec, {});
  long long lo = ord_ + o.ord_;
  long long hi = end_idx(*this) + end_idx(o) - 1;
  if (prec != kExactPrec) hi = std::min(hi, prec);
  if (lo >= hi) return LaurentNumber(*F_, prec, prec, {});
  std::vector<uint16_t> d(size_t(hi - lo), 0);
  for (size_t i = 0; i < digits_.size(); ++i) {
    if (digits_[i] == 0) continue;
    long long base = ord_ + (long long)i + o.ord_;
    size_t jmax = std::min(o.digits_.size(), size_t(hi - base > 0 ? hi - base : 0));
    for (size_t j = 0; j < jmax; ++j) {
      if (o.digits_[j] == 0) continue;
      size_t k = size_t(base + (long long)j - lo);
      d[k] = F_->add(d[k], F_->mul(digits_[i], o.digits_[j]));
    }
  }
  return LaurentNumber(*F_, lo, prec, std::move(d));
}

LaurentNumber LaurentNumber::scaled(uint16_t a) const {
  if (a == 0) {
    long long prec = prec_;
    return LaurentNumber(*F_, prec, prec, {});
  }
  std::vector<uint16_t> d(digits_.size());
  for (size_t i = 0; i < digits_.size(); ++i) d[i] = F_->mul(digits_[i], a);
  return LaurentNumber(*F_, ord_, prec_, std::move(d));
}

LaurentNumber LaurentNumber::times_theta_pow(long long n) const {
  long long prec = prec_ == kExactPrec ? kExactPrec : prec_ - n;
  return LaurentNumber(*F_, ord_ - n, prec, digits_);
}

LaurentNumber LaurentNumber::inv() const {
  if (digits_.empty())
    throw std::logic_error("inverse needs a known leading digit");
  if (prec_ == kExactPrec && digits_.size() > 1)
    throw std::logic_error("inverse of an exact series needs prior truncation");
  uint16_t c0 = F_->inv(digits_[0]);
  if (prec_ == kExactPrec)
    return LaurentNumber(*F_, -ord_, kExactPrec, {c0});
  size_t R = size_t(prec_ - ord_);
  std::vector<uint16_t> s(R, 0);
  s[0] = c0;
  for (size_t n = 1; n < R; ++n) {
    uint16_t acc = 0;
    size_t imax = std::min(n, digits_.size() - 1);
    for (size_t i = 1; i <= imax; ++i)
      acc = F_->add(acc, F_->mul(digits_[i], s[n - i]));
    s[n] = F_->neg(F_->mul(c0, acc));
  }
  return LaurentNumber(*F_, -ord_, prec_ - 2 * ord_, std::move(s));
}

LaurentNumber LaurentNumber::pow(long long n) const {
  if (n < 0) throw std::logic_error("negative power of a Laurent number");
  LaurentNumber acc = one(*F_);
  LaurentNumber base = *this;
  while (n > 0) {
    if (n & 1) acc = acc * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return acc;
}

LaurentNumber LaurentNumber::truncate(long long new_prec) const {
  long long prec = std::min(prec_, new_prec);
  return LaurentNumber(*F_, ord_, prec, digits_);
}

LaurentNumber LaurentNumber::frobenius_power(int n) const {
  if (n < 0) throw std::logic_error("negative Frobenius twist is never materialized");
  if (n == 0) return *this;
  long long s = 1;
  for (int i = 0; i < n; ++i) s *= F_->q();
  long long prec = prec_ == kExactPrec ? kExactPrec : prec_ * s;
  if (digits_.empty()) {
    long long z = prec_ == kExactPrec ? kExactPrec : ord_ * s;
    return LaurentNumber(*F_, z, prec, {});
  }
  std::vector<uint16_t> d(size_t(((long long)digits_.size() - 1) * s + 1), 0);
  for (size_t i = 0; i < digits_.size(); ++i) d[i * size_t(s)] = digits_[i];
  return LaurentNumber(*F_, ord_ * s, prec, std::move(d));
}

LaurentNumber LaurentNumber::frobenius_truncated(int n, long long cap) const {
  if (n < 0) throw std::logic_error("negative Frobenius twist is never materialized");
  long long s = 1;
  for (int i = 0; i < n; ++i) s *= F_->q();
  long long prec = prec_ == kExactPrec ? cap : std::min(prec_ * s, cap);
  if (digits_.empty()) return LaurentNumber(*F_, prec, prec, {});
  long long lo = ord_ * s;
  if (lo >= prec) return LaurentNumber(*F_, prec, prec, {});
  std::vector<uint16_t> d;
  for (size_t i = 0; i < digits_.size(); ++i) {
    long long k = (ord_ + (long long)i) * s;
    if (k >= prec) break;
    if ((long long)d.size() <= k - lo) d.resize(size_t(k - lo) + 1, 0);
    d[size_t(k - lo)] = digits_[i];
  }
  return LaurentNumber(*F_, lo, prec, std::move(d));
}

std::string LaurentNumber::to_string() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < digits_.size(); ++i) {
    if (i) os << " ";
    os << digits_[i];
  }
  os << "]@" << (digits_.empty() ? 0 : ord_);
  if (prec_ == kExactPrec)
    os << " exact";
  else
    os << " prec " << prec_;
  return os.str();
}

long long agreement_prec(const LaurentNumber& a, const LaurentNumber& b) {
  long long bound = std::min(a.prec(), b.prec());
  long long lo = std::min(first_idx(a), first_idx(b));
  long long hi = std::max(end_idx(a), end_idx(b));
  if (bound != LaurentNumber::kExactPrec) hi = std::min(hi, bound);
  for (long long k = lo; k < hi; ++k)
    if (a.digit(k) != b.digit(k)) return std::min(k, bound);
  return bound;
}

LaurentNumber laurent_from_ratfunc(const RatFunc& r, long long prec) {
  return laurent_from_quotient(r.num(), r.den(), prec);
}

LaurentNumber laurent_from_quotient(const UniPoly& num, const UniPoly& den,
                                    long long prec) {
  const FqCtx& F = num.field();
  if (den.is_zero()) throw std::logic_error("laurent expansion of x/0");
  if (num.is_zero()) return LaurentNumber::exact_zero(F);
  LaurentNumber n = LaurentNumber::from_unipoly(num.with_var(Var::theta));
  long long dd = den.deg();
  if (dd == 0) return n.scaled(F.inv(den.coeff(0))).truncate(prec);
  long long T = std::max(prec + (long long)num.deg() - 2 * dd, -dd + 1);
  LaurentNumber di =
      LaurentNumber::from_unipoly(den.with_var(Var::theta)).truncate(T).inv();
  return (n * di).truncate(prec);
}

}  // namespace cmzv
