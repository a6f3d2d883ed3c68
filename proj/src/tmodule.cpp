#include "cmzv/tmodule.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <string>

namespace cmzv {

namespace {

bool exactly_zero(const RatFunc& x) { return x.is_zero(); }
// A window with no known digit may still hide lower terms, so only the exact
// zero is structurally skippable.
bool exactly_zero(const LaurentNumber& x) { return x.is_zero() && x.is_exact(); }

long long floor_div(long long a, long long b) {
  return a >= 0 ? a / b : -((-a + b - 1) / b);
}

// m * f without overflow for |m| up to the order cap; f >= 1.
long long sat_mul_ord(long long m, long long f) {
  if (f <= 1) return m;
  if (m >= 0) return m > kOrdCap / f ? kOrdCap : m * f;
  return -m > kOrdCap / f ? -kOrdCap : m * f;
}

// Laurent window of an exact rational with at least rel digits past the
// leading one; polynomials stay exact.
LaurentNumber laur_rel(const RatFunc& x, long long rel) {
  if (x.is_zero()) return LaurentNumber::exact_zero(x.field());
  if (x.is_poly()) return LaurentNumber::from_unipoly(x.num());
  return laurent_from_quotient(x.num(), x.den(), sat_add(x.ord_inf(), rel));
}

// Frobenius twist keeping roughly rel digits past the (scaled) leading one;
// unbounded twists of wide windows would blow the storage up by q^n.
LaurentNumber twist_rel(const LaurentNumber& x, int n, long long rel) {
  if (n == 0 || exactly_zero(x)) return x;
  long long lead = x.is_zero() ? x.prec() : x.ord();
  long long qn = sat_qpow(x.field().q(), n);
  return x.frobenius_truncated(n, sat_add(sat_mul_ord(lead, qn), rel));
}

// edge[a] == 1 iff the block nilpotent N has a one in row a (column a + 1).
std::vector<char> block_edges(const std::vector<int>& blocks) {
  std::vector<char> e;
  for (int b : blocks) {
    for (int k = 0; k + 1 < b; ++k) e.push_back(1);
    e.push_back(0);
  }
  return e;
}

template <class T>
Mat<T> n_commutator(const std::vector<char>& edge, const Mat<T>& y, const T& zero) {
  int d = y.rows();
  Mat<T> r(d, d, zero);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      bool up = edge[size_t(a)] != 0;              // (N y)[a][b] = y[a+1][b]
      bool right = b > 0 && edge[size_t(b - 1)];   // (y N)[a][b] = y[a][b-1]
      if (up && right)
        r.at(a, b) = y.at(a + 1, b) - y.at(a, b - 1);
      else if (up)
        r.at(a, b) = y.at(a + 1, b);
      else if (right)
        r.at(a, b) = -y.at(a, b - 1);
    }
  return r;
}

// Solves X (c I + N) - (theta I + N) X = B as the nilpotent cascade
// X = sum_k ad_N^k(B) invc^(k+1) with invc = 1/(c - theta); ad_N^k(B)
// vanishes for k > nb = 2 (max block - 1), which also ends the loop when
// numeric windows cannot show the entries are zero.
template <class T>
Mat<T> sylvester_solve(const std::vector<char>& edge, int nb, const Mat<T>& b,
                       const T& invc, const T& zero) {
  Mat<T> x(b.rows(), b.cols(), zero);
  Mat<T> cur = b;
  T pw = invc;
  for (int k = 0; k <= nb; ++k) {
    bool any = false;
    for (int i = 0; i < cur.rows(); ++i)
      for (int j = 0; j < cur.cols(); ++j) {
        const T& y = cur.at(i, j);
        if (exactly_zero(y)) continue;
        any = true;
        x.at(i, j) = x.at(i, j) + y * pw;
      }
    if (!any || k == nb) break;
    cur = n_commutator(edge, cur, zero);
    pw = pw * invc;
  }
  return x;
}

// r += a * b (or -=), skipping structurally zero entries.
template <class T>
void add_product(Mat<T>& r, const Mat<T>& a, const Mat<T>& b, bool negate) {
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const T& x = a.at(i, k);
      if (exactly_zero(x)) continue;
      for (int j = 0; j < b.cols(); ++j) {
        const T& y = b.at(k, j);
        if (exactly_zero(y)) continue;
        if (negate)
          r.at(i, j) = r.at(i, j) - x * y;
        else
          r.at(i, j) = r.at(i, j) + x * y;
      }
    }
}

Mat<RatFunc> twist_mat(const Mat<RatFunc>& a, int n) {
  if (n == 0) return a;
  Mat<RatFunc> r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (!a.at(i, j).is_zero()) r.at(i, j) = a.at(i, j).twist(n);
  return r;
}

Mat<LaurentNumber> twist_mat_num(const Mat<LaurentNumber>& a, int n, long long rel) {
  if (n == 0) return a;
  Mat<LaurentNumber> r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      r.at(i, j) = twist_rel(a.at(i, j), n, rel);
  return r;
}

bool mat_zero(const Mat<RatFunc>& a) {
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (!a.at(i, j).is_zero()) return false;
  return true;
}

// 1/(theta^(q^i) - theta) = theta^(-q^i) sum_k theta^(k (1 - q^i)): every
// digit in the window is one, spaced q^i - 1 apart.
LaurentNumber inv_c_minus_theta(const FqCtx& F, int i, long long rel) {
  long long qi = sat_qpow(F.q(), i);
  if (i < 1 || qi >= kOrdCap)
    throw std::runtime_error("stream level out of range");
  long long step = qi - 1;
  std::vector<uint16_t> digs(size_t(rel), 0);
  for (long long k = 0; k * step < rel; ++k) {
    digs[size_t(k * step)] = 1;
    if (step == 0) break;
  }
  return LaurentNumber::from_digits(F, qi, std::move(digs), qi + rel);
}

int max_block(const std::vector<int>& blocks) {
  return *std::max_element(blocks.begin(), blocks.end());
}

constexpr int kMaxNumericLevel = 48;
constexpr int kMaxExactLevel = 24;

void extend_numeric(const TModule& G, NumericStream& ns, int order) {
  const FqCtx& F = G.field();
  const LaurentNumber lz = LaurentNumber::exact_zero(F);
  const int d = G.dim();
  if (order > kMaxNumericLevel)
    throw std::runtime_error("numeric stream level out of range");
  if (ns.e.empty()) {
    Mat<LaurentNumber> id(d, d, lz);
    for (int i = 0; i < d; ++i) id.at(i, i) = LaurentNumber::one(F);
    ns.e.push_back(id);
    ns.p.push_back(id);
  }
  if (order < int(ns.e.size())) return;
  std::vector<char> edge = block_edges(G.blocks());
  int nb = 2 * (max_block(G.blocks()) - 1);
  int tdeg = G.rho_t().tau_degree();
  std::vector<Mat<LaurentNumber>> ak;
  for (int k = 1; k <= tdeg; ++k) {
    Mat<RatFunc> m = G.rho_t().coeff(k);
    Mat<LaurentNumber> mn(d, d, lz);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (!m.at(i, j).is_zero()) mn.at(i, j) = laur_rel(m.at(i, j), ns.rel + 8);
    ak.push_back(std::move(mn));
  }
  for (int i = int(ns.e.size()); i <= order; ++i) {
    LaurentNumber invc = inv_c_minus_theta(F, i, ns.rel);
    Mat<LaurentNumber> be(d, d, lz), bp(d, d, lz);
    for (int k = 1; k <= tdeg && k <= i; ++k) {
      add_product(be, ak[size_t(k - 1)],
                  twist_mat_num(ns.e[size_t(i - k)], k, ns.rel + 8), false);
      add_product(bp, ns.p[size_t(i - k)],
                  twist_mat_num(ak[size_t(k - 1)], i - k, ns.rel + 8), true);
    }
    ns.e.push_back(sylvester_solve(edge, nb, be, invc, lz));
    ns.p.push_back(sylvester_solve(edge, nb, bp, invc, lz));
  }
}

long long ord_floor(const LaurentNumber& x) {
  return x.is_zero() ? x.prec() : x.ord();
}

constexpr int kMaxEvalTerms = 48;
constexpr int kGuardRun = 5;
constexpr long long kGuardDigits = 20;

PointEval eval_stream(TModule& G, const std::vector<LaurentNumber>& z,
                      long long prec, bool is_log, bool at_special) {
  const FqCtx& F = G.field();
  if (int(z.size()) != G.dim())
    throw std::invalid_argument("point dimension mismatch");
  if (prec < 1) throw std::invalid_argument("precision must be positive");
  // The convergence certificate covers the logarithm at the module's own
  // special point; elsewhere the stopping rule is a heuristic guard.
  bool certified = is_log && at_special && G.has_provenance();
  if (certified) {
    DomainReport rep = domain_check(G.index(), G.point(), Regime::boundary);
    if (!rep.ok) throw std::domain_error(rep.message);
  }
  bool heuristic = !certified;
  long long rel = prec + 180;
  long long capz = prec + 150;
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<LaurentNumber> acc(z.size(), LaurentNumber::exact_zero(F));
    long long terms = 0;
    int consec = 0;
    for (int i = 0; consec < kGuardRun; ++i) {
      if (i > kMaxEvalTerms)
        throw std::runtime_error("exp/log series guard exceeded at term " +
                                 std::to_string(i));
      const NumericStream& ns = G.numeric_stream(rel, i);
      const Mat<LaurentNumber>& m = is_log ? ns.p[size_t(i)] : ns.e[size_t(i)];
      std::vector<LaurentNumber> zi;
      zi.reserve(z.size());
      for (const LaurentNumber& x : z) zi.push_back(twist_rel(x, i, capz));
      ++terms;
      bool small = true;
      long long minord = LaurentNumber::kExactPrec;
      for (size_t a = 0; a < z.size(); ++a) {
        LaurentNumber t = LaurentNumber::exact_zero(F);
        for (size_t b = 0; b < z.size(); ++b) {
          const LaurentNumber& mv = m.at(int(a), int(b));
          if (exactly_zero(mv) || exactly_zero(zi[b])) continue;
          t = t + mv * zi[b];
        }
        acc[a] = acc[a] + t;
        if (ord_floor(t) < prec + kGuardDigits) small = false;
        if (!t.is_zero()) minord = std::min(minord, t.ord());
      }
      if (minord < -(prec + 400))
        throw std::runtime_error("exp/log series diverged at term " +
                                 std::to_string(i));
      consec = small ? consec + 1 : 0;
    }
    long long worst = LaurentNumber::kExactPrec;
    for (const LaurentNumber& x : acc) worst = std::min(worst, x.prec());
    if (worst >= prec) {
      PointEval out;
      out.value.reserve(acc.size());
      for (const LaurentNumber& x : acc) out.value.push_back(x.truncate(prec));
      out.prec = prec;
      out.terms = terms;
      out.heuristic = heuristic;
      return out;
    }
    long long bump = 2 * (prec - worst) + 120;
    rel += bump;
    capz += bump;
  }
  throw std::runtime_error(
      "requested precision unattainable for the given operand precision");
}

std::vector<LaurentNumber> point_to_laurent(const std::vector<RatFunc>& z,
                                            long long rel) {
  std::vector<LaurentNumber> r;
  r.reserve(z.size());
  for (const RatFunc& x : z) r.push_back(laur_rel(x, rel));
  return r;
}

long long vec_agreement(const std::vector<LaurentNumber>& a,
                        const std::vector<LaurentNumber>& b) {
  long long m = LaurentNumber::kExactPrec;
  for (size_t i = 0; i < a.size(); ++i)
    m = std::min(m, agreement_prec(a[i], b[i]));
  return m;
}

}  // namespace

struct TModule::Caches {
  std::mutex lock;
  std::unique_ptr<ExpLogStream> exact;
  std::map<long long, NumericStream> numeric;
};

TModule::TModule(const FqCtx& F, std::vector<int> blocks, TwistedMatrix rho_t)
    : F_(&F), blocks_(std::move(blocks)), rho_(std::move(rho_t)),
      caches_(new Caches) {
  if (blocks_.empty())
    throw std::invalid_argument("module needs at least one block");
  for (int b : blocks_) {
    if (b < 1) throw std::invalid_argument("block sizes must be positive");
    starts_.push_back(dim_);
    dim_ += b;
  }
  validate_shape();
}

TModule::TModule(TModule&& o) noexcept
    : F_(o.F_), blocks_(std::move(o.blocks_)), starts_(std::move(o.starts_)),
      dim_(o.dim_), rho_(std::move(o.rho_)), s_(std::move(o.s_)),
      u_(std::move(o.u_)), v_(std::move(o.v_)), caches_(std::move(o.caches_)) {
  if (caches_ && caches_->exact) caches_->exact->G_ = this;
}

TModule::~TModule() = default;

void TModule::validate_shape() const {
  if (rho_.rows() != dim_ || rho_.cols() != dim_)
    throw std::invalid_argument("t-action dimension mismatch");
  if (!rho_.field().same(*F_))
    throw std::invalid_argument("t-action field mismatch");
  RatFunc z = RatFunc::zero(*F_, Var::theta);
  RatFunc one = RatFunc::one(*F_, Var::theta);
  RatFunc th(UniPoly::monomial(*F_, Var::theta, 1, 1));
  Mat<RatFunc> expect(dim_, dim_, z);
  std::vector<char> edge = block_edges(blocks_);
  for (int i = 0; i < dim_; ++i) {
    expect.at(i, i) = th;
    if (edge[size_t(i)]) expect.at(i, i + 1) = one;
  }
  if (rho_.partial() != expect)
    throw std::invalid_argument(
        "differential part must be theta plus the block nilpotent");
}

const Index& TModule::index() const {
  if (!s_) throw std::logic_error("module carries no construction data");
  return *s_;
}

const PointTuple& TModule::point() const {
  if (!u_) throw std::logic_error("module carries no construction data");
  return *u_;
}

const std::vector<RatFunc>& TModule::special_point() const {
  if (!s_) throw std::logic_error("module carries no construction data");
  return v_;
}

const ExpLogStream& TModule::exact_stream(int order) {
  std::lock_guard<std::mutex> hold(caches_->lock);
  if (!caches_->exact) caches_->exact.reset(new ExpLogStream(*this));
  caches_->exact->extend_locked(order);
  return *caches_->exact;
}

const NumericStream& TModule::numeric_stream(long long rel, int order) {
  std::lock_guard<std::mutex> hold(caches_->lock);
  NumericStream& ns = caches_->numeric[rel];
  ns.rel = rel;
  extend_numeric(*this, ns, order);
  return ns;
}

void ExpLogStream::extend_locked(int order) {
  TModule& G = *G_;
  const FqCtx& F = G.field();
  const RatFunc z = RatFunc::zero(F, Var::theta);
  const int d = G.dim();
  if (order > kMaxExactLevel)
    throw std::invalid_argument("exact stream order out of range");
  if (e_.empty()) {
    Mat<RatFunc> id =
        Mat<RatFunc>::identity(d, z, RatFunc::one(F, Var::theta));
    e_.push_back(id);
    p_.push_back(id);
  }
  std::vector<char> edge = block_edges(G.blocks());
  int nb = 2 * (max_block(G.blocks()) - 1);
  int tdeg = G.rho_t().tau_degree();
  std::vector<Mat<RatFunc>> ak;
  for (int k = 1; k <= tdeg; ++k) ak.push_back(G.rho_t().coeff(k));
  UniPoly th = UniPoly::monomial(F, Var::theta, 1, 1);
  for (int i = int(e_.size()); i <= order; ++i) {
    long long qi = 1;
    for (int t = 0; t < i; ++t) {
      qi *= F.q();
      if (qi > (1LL << 22))
        throw std::invalid_argument("exact stream order out of range");
    }
    RatFunc invc(UniPoly::one(F, Var::theta),
                 UniPoly::monomial(F, Var::theta, 1, qi) - th);
    Mat<RatFunc> be(d, d, z), bp(d, d, z);
    for (int k = 1; k <= tdeg && k <= i; ++k) {
      if (mat_zero(ak[size_t(k - 1)])) continue;
      add_product(be, ak[size_t(k - 1)], twist_mat(e_[size_t(i - k)], k), false);
      add_product(bp, p_[size_t(i - k)], twist_mat(ak[size_t(k - 1)], i - k), true);
    }
    e_.push_back(sylvester_solve(edge, nb, be, invc, z));
    p_.push_back(sylvester_solve(edge, nb, bp, invc, z));
    // The two streams must compose to the identity: the tau^i coefficient of
    // Exp . Log is sum_{a+b=i} e_a P_b^(a) and has to vanish for i >= 1.
    Mat<RatFunc> acc(d, d, z);
    for (int a = 0; a <= i; ++a)
      add_product(acc, e_[size_t(a)], twist_mat(p_[size_t(i - a)], a), false);
    if (!mat_zero(acc))
      throw std::logic_error(
          "exp/log streams fail to compose to the identity at order " +
          std::to_string(i));
  }
}

TModule build_module(const FqCtx& F, const Index& s, const PointTuple& u) {
  if (s.depth() != u.depth())
    throw std::invalid_argument("index/point depth mismatch");
  if (!u.field().same(F)) throw std::invalid_argument("field mismatch");
  int r = s.depth();
  int d = s.total_dim();
  std::vector<int> blocks;
  std::vector<int> starts;
  int off = 0;
  for (int i = 1; i <= r; ++i) {
    blocks.push_back(s.block_dim(i));
    starts.push_back(off);
    off += s.block_dim(i);
  }
  RatFunc z = RatFunc::zero(F, Var::theta);
  RatFunc one = RatFunc::one(F, Var::theta);
  RatFunc th(UniPoly::monomial(F, Var::theta, 1, 1));
  Mat<RatFunc> a0(d, d, z);
  std::vector<char> edge = block_edges(blocks);
  for (int i = 0; i < d; ++i) {
    a0.at(i, i) = th;
    if (edge[size_t(i)]) a0.at(i, i + 1) = one;
  }
  Mat<RatFunc> em(d, d, z);
  for (int l = 1; l <= r; ++l) {
    int row = starts[size_t(l - 1)] + blocks[size_t(l - 1)] - 1;
    RatFunc prod = one;
    for (int m = l; m <= r; ++m) {
      if (m > l) prod = prod * u.at(m - 1);
      em.at(row, starts[size_t(m - 1)]) = prod.scaled(F.sign(m - l));
    }
  }
  TwistedMatrix rho = TwistedMatrix::from_matrix(a0);
  rho.add_term(em, 1);
  TModule G(F, blocks, rho);
  G.s_ = s;
  G.u_ = u;
  std::vector<RatFunc> v(size_t(d), z);
  for (int i = 1; i <= r; ++i) {
    RatFunc prod = one;
    for (int k = i; k <= r; ++k) prod = prod * u.at(k);
    v[size_t(starts[size_t(i - 1)] + blocks[size_t(i - 1)] - 1)] =
        prod.scaled(F.sign(r - i));
  }
  G.v_ = std::move(v);
  return G;
}

TModule carlitz_tensor(const FqCtx& F, int n) {
  return build_module(F, Index({n}), PointTuple::ones(F, 1));
}

TwistedMatrix rho_poly(const TModule& G, const UniPoly& b_in_t) {
  const FqCtx& F = G.field();
  TwistedMatrix res(F, G.dim(), G.dim());
  TwistedMatrix id = TwistedMatrix::identity(F, G.dim());
  for (long long k = b_in_t.deg(); k >= 0; --k) {
    res = res * G.rho_t();
    uint16_t a = b_in_t.coeff(k);
    if (a) res = res + id.scaled(a);
  }
  return res;
}

TwistedMatrix rho_poly(const TModule& G, const BiPoly& b) {
  if (b.deg_theta() > 0)
    throw std::invalid_argument("t-action argument must be free of theta");
  std::vector<uint16_t> coeffs;
  for (long long i = 0; i <= b.deg_t(); ++i)
    coeffs.push_back(b.coeff_t(i).coeff(0));
  return rho_poly(G, UniPoly(G.field(), Var::t, std::move(coeffs)));
}

Mat<RatFunc> d_rho(const TModule& G, const BiPoly& b) {
  if (b.deg_theta() > 0)
    throw std::invalid_argument("t-action argument must be free of theta");
  const FqCtx& F = G.field();
  RatFunc z = RatFunc::zero(F, Var::theta);
  Mat<RatFunc> m(G.dim(), G.dim(), z);
  int maxb = max_block(G.blocks());
  std::vector<RatFunc> der;
  der.reserve(size_t(maxb));
  for (int k = 0; k < maxb; ++k)
    der.push_back(RatFunc(b.hyperderivative(k).eval_t_theta()));
  for (int i = 1; i <= G.block_count(); ++i) {
    int off = G.block_start(i);
    int di = G.block_dim(i);
    for (int a = 0; a < di; ++a)
      for (int w = a; w < di; ++w) m.at(off + a, off + w) = der[size_t(w - a)];
  }
  return m;
}

const ExpLogStream& exp_log_coeffs(TModule& G, int N) {
  return G.exact_stream(N);
}

PointEval exp_eval(TModule& G, const std::vector<LaurentNumber>& z, long long prec) {
  return eval_stream(G, z, prec, false, false);
}

PointEval log_eval(TModule& G, const std::vector<LaurentNumber>& z, long long prec) {
  return eval_stream(G, z, prec, true, false);
}

PointEval exp_eval(TModule& G, const std::vector<RatFunc>& z, long long prec) {
  return eval_stream(G, point_to_laurent(z, prec + 700), prec, false, false);
}

PointEval log_eval(TModule& G, const std::vector<RatFunc>& z, long long prec) {
  bool at_special = G.has_provenance() && z == G.special_point();
  return eval_stream(G, point_to_laurent(z, prec + 700), prec, true, at_special);
}

std::vector<LaurentNumber> delta0_iota(const TModule& G,
                                       const std::vector<Jet<LaurentNumber>>& rows) {
  if (int(rows.size()) != G.block_count())
    throw std::invalid_argument("row count must match the block count");
  std::vector<LaurentNumber> out;
  out.reserve(size_t(G.dim()));
  for (int i = 1; i <= G.block_count(); ++i) {
    int di = G.block_dim(i);
    if (rows[size_t(i - 1)].len() < di)
      throw std::invalid_argument("jet too short for its block");
    for (int k = di - 1; k >= 0; --k)
      out.push_back(rows[size_t(i - 1)].coeff(k));
  }
  return out;
}

std::vector<RatFunc> delta0_iota_exact(const TModule& G,
                                       const std::vector<BiPoly>& rows) {
  if (int(rows.size()) != G.block_count())
    throw std::invalid_argument("row count must match the block count");
  std::vector<RatFunc> out;
  out.reserve(size_t(G.dim()));
  for (int i = 1; i <= G.block_count(); ++i) {
    int di = G.block_dim(i);
    for (int k = di - 1; k >= 0; --k)
      out.push_back(RatFunc(rows[size_t(i - 1)].hyperderivative(k).eval_t_theta()));
  }
  return out;
}

std::vector<RatFunc> delta1_iota(const TModule& G, const WCoeffs& c) {
  if (int(c.size()) != G.block_count())
    throw std::invalid_argument("coefficient block count mismatch");
  std::vector<RatFunc> out;
  out.reserve(size_t(G.dim()));
  for (int i = 1; i <= G.block_count(); ++i) {
    if (int(c[size_t(i - 1)].size()) != G.block_dim(i))
      throw std::invalid_argument("coefficient block size mismatch");
    for (const RatFunc& x : c[size_t(i - 1)]) out.push_back(x);
  }
  return out;
}

WCoeffs w_from_special_point(const TModule& G) {
  const std::vector<RatFunc>& v = G.special_point();
  WCoeffs c;
  for (int i = 1; i <= G.block_count(); ++i) {
    int di = G.block_dim(i);
    std::vector<RatFunc> row(size_t(di), RatFunc::zero(G.field(), Var::theta));
    row[size_t(di - 1)] = v[size_t(G.block_start(i) + di - 1)];
    c.push_back(std::move(row));
  }
  return c;
}

ThetaApparatus::ThetaApparatus(PolylogCache& pc, const Index& s, const PointTuple& u)
    : pc_(&pc), s_(s), u_(u) {
  if (s.depth() != u.depth())
    throw std::invalid_argument("index/point depth mismatch");
  if (!pc.field().same(u.field()))
    throw std::invalid_argument("field mismatch");
  int r = s.depth();
  for (int i = 1; i <= r; ++i) dims_.push_back(s.block_dim(i));
  prod_.assign(size_t(r), {});
  for (int i = 1; i <= r; ++i) {
    RatFunc p = RatFunc::one(u.field(), Var::theta);
    prod_[size_t(i - 1)].push_back(p);
    for (int j = i + 1; j <= r; ++j) {
      p = p * u.at(j - 1);
      prod_[size_t(i - 1)].push_back(p);
    }
  }
}

Jet<LaurentNumber> ThetaApparatus::entry(int m, int i, int j, int len,
                                         long long rel) const {
  if (m < 1) throw std::invalid_argument("twist order must be positive");
  if (i < 1 || j < i || j > depth())
    throw std::invalid_argument("entry indices out of range");
  Jet<LaurentNumber> geo = pc_->geometric(m, dims_[size_t(j - 1)], len, rel);
  LaurentNumber cl =
      twist_rel(laur_rel(prod_[size_t(i - 1)][size_t(j - i)], rel + 8), m - 1,
                rel + 8);
  if ((j - i) % 2) cl = cl.scaled(pc_->field().neg(1));
  return geo.scaled_by(cl);
}

Mat<Jet<LaurentNumber>> ThetaApparatus::matrix(int m, int len, long long rel) const {
  int r = depth();
  Jet<LaurentNumber> zj =
      Jet<LaurentNumber>::zero(LaurentNumber::exact_zero(pc_->field()), len);
  Mat<Jet<LaurentNumber>> out(r, r, zj);
  for (int i = 1; i <= r; ++i)
    for (int j = i; j <= r; ++j) out.at(i - 1, j - 1) = entry(m, i, j, len, rel);
  return out;
}

Jet<LaurentNumber> ThetaApparatus::basis_power(int n, int k, int len,
                                               long long rel) const {
  const FqCtx& F = pc_->field();
  if (k < 0 || n < 0) throw std::invalid_argument("basis power out of range");
  std::vector<LaurentNumber> unit(size_t(len), LaurentNumber::exact_zero(F));
  unit[0] = LaurentNumber::one(F);
  if (k == 0) return Jet<LaurentNumber>(std::move(unit));
  if (n == 0) {
    std::vector<LaurentNumber> c(size_t(len), LaurentNumber::exact_zero(F));
    if (k < len) c[size_t(k)] = LaurentNumber::one(F);
    return Jet<LaurentNumber>(std::move(c));
  }
  long long qn = sat_qpow(F.q(), n);
  if (qn >= kOrdCap) throw std::runtime_error("twist order out of range");
  long long win = std::min(qn, rel + 4);
  std::vector<uint16_t> digs(size_t(win), 0);
  digs[0] = F.neg(1);
  if (qn - 1 < win) digs[size_t(qn - 1)] = 1;
  LaurentNumber c0 = LaurentNumber::from_digits(
      F, -qn, std::move(digs),
      win == qn ? LaurentNumber::kExactPrec : -qn + win);
  std::vector<LaurentNumber> base(size_t(len), LaurentNumber::exact_zero(F));
  base[0] = c0;
  if (len > 1) base[1] = LaurentNumber::one(F);
  Jet<LaurentNumber> b(std::move(base));
  Jet<LaurentNumber> res = b;
  for (int t = 1; t < k; ++t) res = res * b;
  return res;
}

Jet<LaurentNumber> ThetaApparatus::w_jet(const WCoeffs& c, int j, int n, int len,
                                         long long rel) const {
  const FqCtx& F = pc_->field();
  if (j < 1 || j > depth()) throw std::invalid_argument("block index out of range");
  if (int(c.size()) != depth() ||
      int(c[size_t(j - 1)].size()) != dims_[size_t(j - 1)])
    throw std::invalid_argument("coefficient block size mismatch");
  int dj = dims_[size_t(j - 1)];
  Jet<LaurentNumber> acc =
      Jet<LaurentNumber>::zero(LaurentNumber::exact_zero(F), len);
  Jet<LaurentNumber> pw = basis_power(n, 0, len, rel);
  Jet<LaurentNumber> base = basis_power(n, 1, len, rel);
  for (int k = 0; k < dj; ++k) {
    const RatFunc& cv = c[size_t(j - 1)][size_t(dj - 1 - k)];
    if (!cv.is_zero())
      acc = acc + pw.scaled_by(twist_rel(laur_rel(cv, rel + 8), n, rel + 8));
    if (k + 1 < dj) pw = pw * base;
  }
  return acc;
}

namespace {

// Growth hypothesis on canonical coefficients: gamma_{i,l} = (q-1)(l +
// ord c_{i,l}) + d_i >= 1 for every nonzero coefficient.  The n-th series
// term then has every jet coefficient of order >= (q^n gmin - d_1 q)/(q-1).
long long hypothesis_gmin(const FqCtx& F, const std::vector<int>& dims,
                          const WCoeffs& c) {
  long long gmin = kOrdCap;
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t l = 0; l < c[i].size(); ++l) {
      const RatFunc& x = c[i][l];
      if (x.is_zero()) continue;
      long long g =
          (long long)(F.q() - 1) * ((long long)l + 1 + x.ord_inf()) + dims[i];
      if (g < 1)
        throw std::domain_error("canonical coefficient (" + std::to_string(i + 1) +
                                "," + std::to_string(l + 1) +
                                ") violates the interpolation growth bound");
      gmin = std::min(gmin, g);
    }
  return gmin;
}

long long series_term_floor(int q, long long gmin, int d1, long long n) {
  long long num = sat_add(sat_mul_ord(gmin, sat_qpow(q, n)), -(long long)d1 * q);
  return floor_div(num, q - 1);
}

Mat<Jet<LaurentNumber>> jet_mat_mul_ut(const Mat<Jet<LaurentNumber>>& a,
                                       const Mat<Jet<LaurentNumber>>& b,
                                       const Jet<LaurentNumber>& zj) {
  int r = a.rows();
  Mat<Jet<LaurentNumber>> out(r, r, zj);
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) {
      Jet<LaurentNumber> acc = zj;
      for (int k = i; k <= j; ++k) acc = acc + a.at(i, k) * b.at(k, j);
      out.at(i, j) = acc;
    }
  return out;
}

struct SeriesAccum {
  std::vector<Jet<LaurentNumber>> g;  // sum over n >= 1, one jet per block
  std::vector<LaurentNumber> lie;     // delta_0 . iota of the sum n = 0..N
  long long terms = 0;
  long long tail_ord = 0;
  long long rel = 0;
};

// Accumulates the solution of the twisted difference equation as jets at
// t = theta.  With check set, every term is verified against the recursion
// f_n Phi'^(1) = f_{n-1}^(1), where the right side is rebuilt from a second
// product chain so that only true jets of rational functions are compared
// (truncated jets do not determine their own twists).
SeriesAccum accumulate_series(const ThetaApparatus& ta, const WCoeffs& c, int len,
                              long long prec, long long forced_terms, bool check) {
  const FqCtx& F = ta.point().field();
  int q = F.q();
  int r = ta.depth();
  std::vector<int> dims;
  for (int i = 1; i <= r; ++i) dims.push_back(ta.index().block_dim(i));
  if (int(c.size()) != r) throw std::invalid_argument("coefficient block count mismatch");
  for (int i = 0; i < r; ++i)
    if (int(c[size_t(i)].size()) != dims[size_t(i)])
      throw std::invalid_argument("coefficient block size mismatch");
  long long gmin = hypothesis_gmin(F, dims, c);
  long long ms = 0;
  for (const auto& row : c)
    for (const RatFunc& x : row)
      if (!x.is_zero()) ms = std::max(ms, -x.ord_inf());
  long long rel = prec + 60 + 3LL * q * dims[0] + 2LL * q * ms;
  long long N;
  if (forced_terms >= 0) {
    N = forced_terms;
  } else {
    N = 1;
    while (series_term_floor(q, gmin, dims[0], N + 1) < prec + 10) {
      if (++N > 96) throw std::logic_error("series cutoff failed to stabilize");
    }
  }
  Jet<LaurentNumber> zj =
      Jet<LaurentNumber>::zero(LaurentNumber::exact_zero(F), len);
  Jet<LaurentNumber> uj = zj;
  {
    std::vector<LaurentNumber> unit(size_t(len), LaurentNumber::exact_zero(F));
    unit[0] = LaurentNumber::one(F);
    uj = Jet<LaurentNumber>(std::move(unit));
  }
  Mat<Jet<LaurentNumber>> m(r, r, zj);
  Mat<Jet<LaurentNumber>> m2(r, r, zj);
  for (int i = 0; i < r; ++i) {
    m.at(i, i) = uj;
    m2.at(i, i) = uj;
  }
  std::vector<Jet<LaurentNumber>> bp1;
  std::vector<LaurentNumber> ul;
  if (check) {
    for (int i = 0; i < r; ++i)
      bp1.push_back(ta.basis_power(1, dims[size_t(i)], len, rel));
    for (int i = 1; i < r; ++i)
      ul.push_back(laur_rel(ta.point().at(i), rel + 8));
  }
  long long need = prec - 30;
  SeriesAccum out;
  out.rel = rel;
  out.g.assign(size_t(r), zj);
  out.lie.assign(size_t(ta.index().total_dim()), LaurentNumber::exact_zero(F));
  for (long long n = 0; n <= N; ++n) {
    std::vector<Jet<LaurentNumber>> w;
    w.reserve(size_t(r));
    for (int j = 1; j <= r; ++j) w.push_back(ta.w_jet(c, j, int(n), len, rel));
    std::vector<Jet<LaurentNumber>> fs(size_t(r), zj);
    if (n >= 1) {
      Mat<Jet<LaurentNumber>> th = ta.matrix(int(n), len, rel);
      if (check) {
        if (n >= 2) m2 = jet_mat_mul_ut(m2, th, zj);
        // fs = jets of the once-twisted previous term, from true jets
        for (int i = 1; i <= r; ++i)
          for (int j = i; j <= r; ++j)
            fs[size_t(i - 1)] =
                fs[size_t(i - 1)] + m2.at(i - 1, j - 1) * w[size_t(j - 1)];
      }
      m = jet_mat_mul_ut(m, th, zj);
    }
    std::vector<Jet<LaurentNumber>> f(size_t(r), zj);
    size_t pos = 0;
    for (int i = 1; i <= r; ++i) {
      for (int j = i; j <= r; ++j)
        f[size_t(i - 1)] =
            f[size_t(i - 1)] + m.at(i - 1, j - 1) * w[size_t(j - 1)];
      for (int k = dims[size_t(i - 1)] - 1; k >= 0; --k, ++pos)
        out.lie[pos] = out.lie[pos] + f[size_t(i - 1)].coeff(k);
      if (n >= 1) out.g[size_t(i - 1)] = out.g[size_t(i - 1)] + f[size_t(i - 1)];
    }
    if (check && n >= 1) {
      for (int l = 1; l <= r; ++l) {
        Jet<LaurentNumber> lhs = f[size_t(l - 1)];
        if (l < r) lhs = lhs + f[size_t(l)].scaled_by(ul[size_t(l - 1)]);
        lhs = lhs * bp1[size_t(l - 1)];
        const Jet<LaurentNumber>& rhs = fs[size_t(l - 1)];
        for (int k = 0; k < len; ++k)
          if (agreement_prec(lhs.coeff(k), rhs.coeff(k)) < need)
            throw std::logic_error(
                "difference equation check failed at block " +
                std::to_string(l) + ", term " + std::to_string(n));
      }
    }
  }
  out.terms = N + 1;
  out.tail_ord = series_term_floor(q, gmin, dims[0], N + 1);
  return out;
}

Jet<LaurentNumber> jet_truncate_prec(const Jet<LaurentNumber>& j, long long prec) {
  std::vector<LaurentNumber> c;
  c.reserve(size_t(j.len()));
  for (int k = 0; k < j.len(); ++k) {
    if (j.coeff(k).prec() < prec)
      throw std::logic_error("internal precision schedule fell short");
    c.push_back(j.coeff(k).truncate(prec));
  }
  return Jet<LaurentNumber>(std::move(c));
}

std::vector<LaurentNumber> vec_truncate_prec(const std::vector<LaurentNumber>& v,
                                             long long prec) {
  std::vector<LaurentNumber> out;
  out.reserve(v.size());
  for (const LaurentNumber& x : v) {
    if (x.prec() < prec)
      throw std::logic_error("internal precision schedule fell short");
    out.push_back(x.truncate(prec));
  }
  return out;
}

}  // namespace

GSeries g_series(PolylogCache& pc, const Index& s, const PointTuple& u,
                 const WCoeffs& c, int len, long long prec) {
  if (len < 1 || prec < 1) throw std::invalid_argument("bad series parameters");
  ThetaApparatus ta(pc, s, u);
  SeriesAccum acc = accumulate_series(ta, c, len, prec, -1, true);
  GSeries out;
  out.terms = acc.terms;
  out.tail_ord = acc.tail_ord;
  out.g.reserve(acc.g.size());
  for (const auto& j : acc.g) out.g.push_back(jet_truncate_prec(j, prec));
  return out;
}

std::vector<LaurentNumber> logformula_partial(PolylogCache& pc, TModule& G,
                                              long long N, long long prec) {
  if (N < 0 || prec < 1) throw std::invalid_argument("bad series parameters");
  ThetaApparatus ta(pc, G.index(), G.point());
  WCoeffs c = w_from_special_point(G);
  SeriesAccum acc = accumulate_series(ta, c, G.block_dim(1), prec, N, false);
  return vec_truncate_prec(acc.lie, prec);
}

LogPaths logformula_series(PolylogCache& pc, TModule& G, long long prec) {
  if (prec < 1) throw std::invalid_argument("precision must be positive");
  const FqCtx& F = G.field();
  long long pw = prec + 30;
  ThetaApparatus ta(pc, G.index(), G.point());
  WCoeffs c = w_from_special_point(G);
  int len = G.block_dim(1);
  SeriesAccum acc = accumulate_series(ta, c, len, pw, -1, true);

  int r = G.block_count();
  std::vector<LaurentNumber> closed;
  closed.reserve(size_t(G.dim()));
  for (int i = 1; i <= r; ++i) {
    Index si = G.index().suffix(i).reversed();
    const std::vector<RatFunc>& ue = G.point().entries();
    std::vector<RatFunc> rev(ue.begin() + (i - 1), ue.end());
    std::reverse(rev.begin(), rev.end());
    PolylogJet cm = cmspl_jet(pc, si, PointTuple(rev), G.block_dim(i), pw);
    uint16_t sign = F.sign(r - i);
    for (int k = G.block_dim(i) - 1; k >= 0; --k)
      closed.push_back(cm.value.coeff(k).scaled(sign));
  }

  PointEval st = log_eval(G, G.special_point(), pw);
  PointEval back = exp_eval(G, acc.lie, pw);
  std::vector<LaurentNumber> vl =
      point_to_laurent(G.special_point(), pw + 8);

  long long agree = LaurentNumber::kExactPrec;
  agree = std::min(agree, vec_agreement(acc.lie, closed));
  agree = std::min(agree, vec_agreement(acc.lie, st.value));
  agree = std::min(agree, vec_agreement(closed, st.value));
  agree = std::min(agree, vec_agreement(back.value, vl));
  if (agree < prec)
    throw std::logic_error("log path disagreement: routes agree only to order " +
                           std::to_string(agree));

  LogPaths out;
  out.series = vec_truncate_prec(acc.lie, prec);
  out.closed = vec_truncate_prec(closed, prec);
  out.stream = vec_truncate_prec(st.value, prec);
  out.expmap = vec_truncate_prec(back.value, prec);
  out.terms = acc.terms;
  out.tail_ord = acc.tail_ord;
  out.agree = std::min(agree, prec);
  return out;
}

}  // namespace cmzv
