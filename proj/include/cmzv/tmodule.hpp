#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "cmzv/jet.hpp"
#include "cmzv/polylog.hpp"
#include "cmzv/twisted.hpp"

namespace cmzv {

class TModule;

// Exact coefficient streams of the exponential and logarithm of a module:
// Exp = sum e_i tau^i and Log = sum P_i tau^i with e_0 = P_0 = I, entries in
// K.  Grown on demand; every extension solves the defining functional
// equations and re-verifies that the streams compose to the identity through
// the new order.  Single writer: extensions run under the parent's lock.
class ExpLogStream {
public:
  TModule& parent() const { return *G_; }
  int computed_order() const { return int(e_.size()) - 1; }
  const Mat<RatFunc>& exp_coeff(int i) const { return e_.at(size_t(i)); }
  const Mat<RatFunc>& log_coeff(int i) const { return p_.at(size_t(i)); }

private:
  friend class TModule;
  explicit ExpLogStream(TModule& G) : G_(&G) {}
  void extend_locked(int order);

  TModule* G_;
  std::deque<Mat<RatFunc>> e_, p_;
};

// Certified numeric mirror of the coefficient streams at a fixed relative
// precision floor; every entry is a Laurent window whose precision is
// tracked through the same recursion.
struct NumericStream {
  long long rel = 0;
  std::deque<Mat<LaurentNumber>> e, p;
};

// Result of an exponential or logarithm evaluation, truncated to exactly the
// requested precision.  heuristic records that the series was stopped by the
// consecutive-small-terms guard alone, with no convergence bound attached.
struct PointEval {
  std::vector<LaurentNumber> value;
  long long prec = 0;
  long long terms = 0;
  bool heuristic = true;
};

// Coefficients of a canonical interpolation point: block i carries the
// polynomial sum_l c[i-1][l-1] (t - theta)^(d_i - l) for l = 1..d_i, so the
// block-last coefficient sits against (t - theta)^0.
using WCoeffs = std::vector<std::vector<RatFunc>>;

// t-module G = G_a^dim with t acting through a twisted matrix rho(t) whose
// differential part is theta I + N, N the block superdiagonal; this normal
// form is validated at construction and assumed by the evaluators and the
// interpolation maps.  Modules built from an index / point pair also carry
// that data together with the distinguished special point v.
class TModule {
public:
  TModule(const FqCtx& F, std::vector<int> blocks, TwistedMatrix rho_t);
  TModule(TModule&&) noexcept;
  ~TModule();

  const FqCtx& field() const { return *F_; }
  int dim() const { return dim_; }
  int block_count() const { return int(blocks_.size()); }
  const std::vector<int>& blocks() const { return blocks_; }
  int block_dim(int i) const { return blocks_.at(size_t(i) - 1); }
  // 0-based offset of 1-based block i.
  int block_start(int i) const { return starts_.at(size_t(i) - 1); }
  const TwistedMatrix& rho_t() const { return rho_; }

  bool has_provenance() const { return s_.has_value(); }
  const Index& index() const;
  const PointTuple& point() const;
  const std::vector<RatFunc>& special_point() const;

  // Exact stream grown (and composition-checked) through the given order.
  const ExpLogStream& exact_stream(int order);
  // Numeric mirror at a relative precision floor, grown through the order.
  const NumericStream& numeric_stream(long long rel, int order);

private:
  friend TModule build_module(const FqCtx&, const Index&, const PointTuple&);

  void validate_shape() const;

  const FqCtx* F_;
  std::vector<int> blocks_;
  std::vector<int> starts_;
  int dim_ = 0;
  TwistedMatrix rho_;
  std::optional<Index> s_;
  std::optional<PointTuple> u_;
  std::vector<RatFunc> v_;

  struct Caches;
  std::unique_ptr<Caches> caches_;
};

// Module attached to an index and a point of the same depth: block sizes
// d_i = s_i + ... + s_r, and rho(t) = (theta I + N) + E tau with E supported
// on block-last rows against block-first columns,
// E[l][m] = (-1)^(m-l) u_l ... u_(m-1) for l < m and 1 on the diagonal
// positions.  The special point v has block-i bottom coordinate
// (-1)^(r-i) u_i ... u_r and zeros elsewhere.
TModule build_module(const FqCtx& F, const Index& s, const PointTuple& u);

// n-th tensor power of the Carlitz module (depth-one index at the point 1).
TModule carlitz_tensor(const FqCtx& F, int n);

// Image of b under rho, for b a polynomial in t alone; rho is a ring
// homomorphism, so the image is evaluated by Horner's rule in rho(t).
TwistedMatrix rho_poly(const TModule& G, const UniPoly& b_in_t);
TwistedMatrix rho_poly(const TModule& G, const BiPoly& b);

// Differential of rho at b: block-diagonal stack of upper triangular banded
// matrices whose (z, w) entry is the order-(w - z) divided-power
// t-derivative of b at t = theta.
Mat<RatFunc> d_rho(const TModule& G, const BiPoly& b);

// Stream extended and composition-verified through order N.
const ExpLogStream& exp_log_coeffs(TModule& G, int N);

// Exp_G and Log_G at a point, certified to prec digits of each coordinate.
// The series is stopped once five consecutive terms have every coordinate of
// order >= prec + 20; a diverging input raises with the offending term
// index.  Log on a module with provenance first checks the boundary domain
// bounds of its point and raises domain_error on violation.
PointEval exp_eval(TModule& G, const std::vector<LaurentNumber>& z, long long prec);
PointEval exp_eval(TModule& G, const std::vector<RatFunc>& z, long long prec);
PointEval log_eval(TModule& G, const std::vector<LaurentNumber>& z, long long prec);
PointEval log_eval(TModule& G, const std::vector<RatFunc>& z, long long prec);

// delta_0 . iota of a row (a_1, ..., a_r): block i lists the jet
// coefficients of a_i at t = theta in descending order d_i - 1, ..., 0.
std::vector<LaurentNumber> delta0_iota(const TModule& G,
                                       const std::vector<Jet<LaurentNumber>>& rows);
std::vector<RatFunc> delta0_iota_exact(const TModule& G,
                                       const std::vector<BiPoly>& rows);

// delta_1 . iota of the canonical point with coefficients c: the stacked
// column (c_{1,1}, ..., c_{1,d_1}, ..., c_{r,1}, ..., c_{r,d_r}).
std::vector<RatFunc> delta1_iota(const TModule& G, const WCoeffs& c);

// Coefficients whose delta_1 . iota image is the special point v.
WCoeffs w_from_special_point(const TModule& G);

// Generator data for the difference-equation series of an index / point
// pair: the twisted upper triangular matrices Theta^(m) (only m >= 1 occurs,
// so all Frobenius twists stay nonnegative) and the interpolation jets of a
// canonical point.  Entry (i, j), 1-based with i <= j, of Theta^(m) is
// (-1)^(j-i) (u_i ... u_{j-1})^(m-1) (t - theta^(q^m))^(-d_j).
class ThetaApparatus {
public:
  ThetaApparatus(PolylogCache& pc, const Index& s, const PointTuple& u);

  int depth() const { return s_.depth(); }
  const Index& index() const { return s_; }
  const PointTuple& point() const { return u_; }

  Jet<LaurentNumber> entry(int m, int i, int j, int len, long long rel) const;
  Mat<Jet<LaurentNumber>> matrix(int m, int len, long long rel) const;
  // Jet at t = theta of (t - theta^(q^n))^k, the interpolation basis factor.
  Jet<LaurentNumber> basis_power(int n, int k, int len, long long rel) const;
  // Jet of w_j^(n) = sum_l c[j-1][l-1]^(n) (t - theta^(q^n))^(d_j - l).
  Jet<LaurentNumber> w_jet(const WCoeffs& c, int j, int n, int len,
                           long long rel) const;

private:
  PolylogCache* pc_;
  Index s_;
  PointTuple u_;
  std::vector<int> dims_;
  std::vector<std::vector<RatFunc>> prod_;  // prod_[i-1][j-i] = u_i ... u_{j-1}
};

// Partial sum of the difference-equation series g = sum_{n>=1} w^(n)
// (Phi'^{-1})^(n) ... (Phi'^{-1})^(1) attached to (s, u) and a canonical
// point c, as a row of jets at t = theta (one jet per block).  The cutoff is
// certified: every omitted term has every jet coefficient of order
// >= tail_ord.  Each call validates the coefficient growth hypothesis on c
// and re-checks the twisted difference equation g^(-1) Phi' - g = w in its
// forward-twisted partial-sum form.
struct GSeries {
  std::vector<Jet<LaurentNumber>> g;
  long long terms = 0;
  long long tail_ord = 0;
};
GSeries g_series(PolylogCache& pc, const Index& s, const PointTuple& u,
                 const WCoeffs& c, int len, long long prec);

// Lie-algebra partial sum through term N of the same series applied to the
// special point data of G and pushed through delta_0 . iota.
std::vector<LaurentNumber> logformula_partial(PolylogCache& pc, TModule& G,
                                              long long N, long long prec);

// Logarithm vector of the special point of G by three routes: the certified
// difference-equation series, the closed-form chain-sum jet coordinates, and
// the coefficient-stream logarithm.  expmap is Exp applied back to the
// series value (it must return v).  Construction fails hard if any two
// routes disagree before prec - 20.
struct LogPaths {
  std::vector<LaurentNumber> series;
  std::vector<LaurentNumber> closed;
  std::vector<LaurentNumber> stream;
  std::vector<LaurentNumber> expmap;
  long long terms = 0;
  long long tail_ord = 0;
  long long agree = 0;  // weakest pairwise agreement order among the routes
};
LogPaths logformula_series(PolylogCache& pc, TModule& G, long long prec);

}  // namespace cmzv
