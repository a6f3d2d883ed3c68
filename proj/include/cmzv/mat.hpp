#pragma once

#include <stdexcept>
#include <vector>

namespace cmzv {

// Dense matrix over any ring type with +, -, *.  Element types carry their
// own context, so constructors take an explicit zero element.
template <class T>
class Mat {
public:
  Mat() : r_(0), c_(0) {}
  Mat(int r, int c, const T& zero_elt)
      : r_(r), c_(c), a_(size_t(r) * size_t(c), zero_elt) {
    if (r <= 0 || c <= 0) throw std::logic_error("empty matrix");
  }
  static Mat identity(int n, const T& zero_elt, const T& one_elt) {
    Mat m(n, n, zero_elt);
    for (int i = 0; i < n; ++i) m.at(i, i) = one_elt;
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }
  T& at(int i, int j) { return a_[idx(i, j)]; }
  const T& at(int i, int j) const { return a_[idx(i, j)]; }

  Mat operator-() const {
    Mat m = *this;
    for (T& x : m.a_) x = -x;
    return m;
  }
  Mat operator+(const Mat& o) const {
    require_shape(o.r_, o.c_);
    Mat m = *this;
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
    return m;
  }
  Mat operator-(const Mat& o) const { return *this + (-o); }
  Mat operator*(const Mat& o) const {
    if (c_ != o.r_) throw std::logic_error("matrix shape mismatch");
    Mat m(r_, o.c_, a_[0]);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < o.c_; ++j) {
        T acc = at(i, 0) * o.at(0, j);
        for (int k = 1; k < c_; ++k) acc = acc + at(i, k) * o.at(k, j);
        m.at(i, j) = std::move(acc);
      }
    return m;
  }
  std::vector<T> mul_vec(const std::vector<T>& v) const {
    if ((int)v.size() != c_) throw std::logic_error("matrix shape mismatch");
    std::vector<T> out;
    out.reserve(size_t(r_));
    for (int i = 0; i < r_; ++i) {
      T acc = at(i, 0) * v[0];
      for (int k = 1; k < c_; ++k) acc = acc + at(i, k) * v[size_t(k)];
      out.push_back(std::move(acc));
    }
    return out;
  }
  Mat scaled_by(const T& s) const {
    Mat m = *this;
    for (T& x : m.a_) x = x * s;
    return m;
  }
  template <class Fn>
  Mat map(Fn fn) const {
    Mat m = *this;
    for (T& x : m.a_) x = fn(x);
    return m;
  }

  bool operator==(const Mat& o) const {
    return r_ == o.r_ && c_ == o.c_ && a_ == o.a_;
  }
  bool operator!=(const Mat& o) const { return !(*this == o); }

private:
  size_t idx(int i, int j) const {
    if (i < 0 || i >= r_ || j < 0 || j >= c_)
      throw std::logic_error("matrix index out of range");
    return size_t(i) * size_t(c_) + size_t(j);
  }
  void require_shape(int r, int c) const {
    if (r_ != r || c_ != c) throw std::logic_error("matrix shape mismatch");
  }

  int r_, c_;
  std::vector<T> a_;
};

}  // namespace cmzv
