#include "cmzv/twisted.hpp"

namespace cmzv {

namespace {

bool mat_is_zero(const Mat<RatFunc>& a) {
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (!a.at(i, j).is_zero()) return false;
  return true;
}

Mat<RatFunc> mat_twist(const Mat<RatFunc>& a, int n) {
  if (n == 0) return a;
  Mat<RatFunc> r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (!a.at(i, j).is_zero()) r.at(i, j) = a.at(i, j).twist(n);
  return r;
}

// Product skipping zero entries; RatFunc multiplication does not.
Mat<RatFunc> mat_mul_sparse(const Mat<RatFunc>& a, const Mat<RatFunc>& b,
                            const RatFunc& zero) {
  Mat<RatFunc> r(a.rows(), b.cols(), zero);
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const RatFunc& x = a.at(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < b.cols(); ++j) {
        const RatFunc& y = b.at(k, j);
        if (y.is_zero()) continue;
        r.at(i, j) = r.at(i, j) + x * y;
      }
    }
  return r;
}

}  // namespace

TwistedMatrix::TwistedMatrix(const FqCtx& F, int rows, int cols)
    : F_(&F), rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0) throw std::logic_error("empty twisted matrix");
}

Mat<RatFunc> TwistedMatrix::zero_mat() const {
  return Mat<RatFunc>(rows_, cols_, RatFunc::zero(*F_, Var::theta));
}

void TwistedMatrix::trim() {
  while (!coef_.empty() && mat_is_zero(coef_.back())) coef_.pop_back();
}

TwistedMatrix TwistedMatrix::from_matrix(const Mat<RatFunc>& a, int tau_power) {
  TwistedMatrix r(a.at(0, 0).field(), a.rows(), a.cols());
  r.add_term(a, tau_power);
  return r;
}

TwistedMatrix TwistedMatrix::identity(const FqCtx& F, int n) {
  return from_matrix(Mat<RatFunc>::identity(n, RatFunc::zero(F, Var::theta),
                                            RatFunc::one(F, Var::theta)));
}

Mat<RatFunc> TwistedMatrix::coeff(int k) const {
  if (k < 0) throw std::logic_error("negative tau power");
  if (k >= int(coef_.size())) return zero_mat();
  return coef_[size_t(k)];
}

void TwistedMatrix::add_term(const Mat<RatFunc>& a, int tau_power) {
  if (a.rows() != rows_ || a.cols() != cols_)
    throw std::logic_error("twisted matrix shape mismatch");
  if (tau_power < 0) throw std::logic_error("negative tau power");
  while (int(coef_.size()) <= tau_power) coef_.push_back(zero_mat());
  coef_[size_t(tau_power)] = coef_[size_t(tau_power)] + a;
  trim();
}

TwistedMatrix TwistedMatrix::operator-() const { return scaled(F_->neg(1)); }

TwistedMatrix TwistedMatrix::operator+(const TwistedMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::logic_error("twisted matrix shape mismatch");
  TwistedMatrix r = *this;
  for (size_t k = 0; k < o.coef_.size(); ++k) r.add_term(o.coef_[k], int(k));
  return r;
}

TwistedMatrix TwistedMatrix::operator-(const TwistedMatrix& o) const {
  return *this + (-o);
}

TwistedMatrix TwistedMatrix::operator*(const TwistedMatrix& o) const {
  if (cols_ != o.rows_) throw std::logic_error("twisted matrix shape mismatch");
  TwistedMatrix r(*F_, rows_, o.cols_);
  RatFunc z = RatFunc::zero(*F_, Var::theta);
  for (size_t i = 0; i < coef_.size(); ++i) {
    if (mat_is_zero(coef_[i])) continue;
    for (size_t j = 0; j < o.coef_.size(); ++j) {
      if (mat_is_zero(o.coef_[j])) continue;
      r.add_term(mat_mul_sparse(coef_[i], mat_twist(o.coef_[j], int(i)), z),
                 int(i + j));
    }
  }
  return r;
}

TwistedMatrix TwistedMatrix::scaled(uint16_t a) const {
  TwistedMatrix r(*F_, rows_, cols_);
  for (size_t k = 0; k < coef_.size(); ++k)
    r.add_term(coef_[k].map([&](const RatFunc& x) { return x.scaled(a); }),
               int(k));
  return r;
}

std::vector<RatFunc> TwistedMatrix::apply(const std::vector<RatFunc>& z) const {
  if (int(z.size()) != cols_) throw std::logic_error("point dimension mismatch");
  std::vector<RatFunc> r(size_t(rows_), RatFunc::zero(*F_, Var::theta));
  for (size_t k = 0; k < coef_.size(); ++k) {
    std::vector<RatFunc> zk;
    zk.reserve(z.size());
    for (const RatFunc& x : z) zk.push_back(x.twist(int(k)));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) {
        const RatFunc& a = coef_[k].at(i, j);
        if (a.is_zero() || zk[size_t(j)].is_zero()) continue;
        r[size_t(i)] = r[size_t(i)] + a * zk[size_t(j)];
      }
  }
  return r;
}

bool TwistedMatrix::operator==(const TwistedMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || !F_->same(*o.F_)) return false;
  if (coef_.size() != o.coef_.size()) return false;
  for (size_t k = 0; k < coef_.size(); ++k)
    if (coef_[k] != o.coef_[k]) return false;
  return true;
}

}  // namespace cmzv
