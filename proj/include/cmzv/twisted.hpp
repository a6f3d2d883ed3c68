#pragma once

#include <stdexcept>
#include <vector>

#include "cmzv/mat.hpp"
#include "cmzv/ratfunc.hpp"

namespace cmzv {

// Matrix over the twisted polynomial ring K{tau}, tau the q-power Frobenius:
// tau a = a^(1) tau for a in K = F_q(theta), so (A tau^i)(B tau^j) =
// A B^(i) tau^(i+j) with the twist applied entrywise.  Stored as the matrix
// coefficients of tau^0, tau^1, ... with trailing zero coefficients trimmed;
// the tau^0 coefficient is the differential part.
class TwistedMatrix {
public:
  TwistedMatrix(const FqCtx& F, int rows, int cols);
  static TwistedMatrix from_matrix(const Mat<RatFunc>& a, int tau_power = 0);
  static TwistedMatrix identity(const FqCtx& F, int n);

  const FqCtx& field() const { return *F_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  // Degree in tau; -1 for the zero matrix.
  int tau_degree() const { return int(coef_.size()) - 1; }
  // Coefficient of tau^k, zero beyond the stored degree.
  Mat<RatFunc> coeff(int k) const;
  Mat<RatFunc> partial() const { return coeff(0); }

  void add_term(const Mat<RatFunc>& a, int tau_power);

  TwistedMatrix operator-() const;
  TwistedMatrix operator+(const TwistedMatrix& o) const;
  TwistedMatrix operator-(const TwistedMatrix& o) const;
  TwistedMatrix operator*(const TwistedMatrix& o) const;
  TwistedMatrix scaled(uint16_t a) const;

  // Value on a point with exact coordinates: sum_k coeff(k) z^(k) with the
  // q^k-th power taken entrywise.
  std::vector<RatFunc> apply(const std::vector<RatFunc>& z) const;

  bool operator==(const TwistedMatrix& o) const;
  bool operator!=(const TwistedMatrix& o) const { return !(*this == o); }

private:
  Mat<RatFunc> zero_mat() const;
  void trim();

  const FqCtx* F_;
  int rows_, cols_;
  std::vector<Mat<RatFunc>> coef_;
};

}  // namespace cmzv
