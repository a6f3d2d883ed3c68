#include "cmzv/field.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace cmzv {

namespace {

// Dense F_p[x] helpers used only for context construction and the
// irreducibility check.  Coefficients ascending, trimmed.
using FpPoly = std::vector<int>;

void fp_trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, int p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  // reduce mod m (monic)
  int dm = int(m.size()) - 1;
  for (int d = int(r.size()) - 1; d >= dm; --d) {
    int c = r[d];
    if (c == 0) continue;
    for (int k = 0; k <= dm; ++k) {
      int& slot = r[d - dm + k];
      slot = ((slot - c * m[k]) % p + p * p) % p;
    }
  }
  r.resize(dm > 0 ? dm : 0);
  fp_trim(r);
  return r;
}

FpPoly fp_powmod(FpPoly base, long long n, const FpPoly& m, int p) {
  FpPoly acc = {1};
  while (n > 0) {
    if (n & 1) acc = fp_mulmod(acc, base, m, p);
    base = fp_mulmod(base, base, m, p);
    n >>= 1;
  }
  return acc;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, int p) {
  auto inv_mod_p = [p](int x) {
    int r = 1, e = p - 2, bse = ((x % p) + p) % p;
    while (e > 0) {
      if (e & 1) r = r * bse % p;
      bse = bse * bse % p;
      e >>= 1;
    }
    return r;
  };
  fp_trim(a);
  fp_trim(b);
  while (!b.empty()) {
    // a mod b
    int db = int(b.size()) - 1;
    int ilead = inv_mod_p(b.back());
    FpPoly r = a;
    for (int d = int(r.size()) - 1; d >= db; --d) {
      int c = r[d] * ilead % p;
      if (c == 0) continue;
      for (int k = 0; k <= db; ++k) {
        int& slot = r[d - db + k];
        slot = ((slot - c * b[k]) % p + p * p) % p;
      }
    }
    fp_trim(r);
    a = b;
    b = r;
  }
  if (!a.empty()) {
    int ilead = inv_mod_p(a.back());
    for (int& c : a) c = c * ilead % p;
  }
  return a;
}

std::string fp_poly_str(const FpPoly& a) {
  if (a.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    if (!s.empty()) s += " + ";
    s += std::to_string(a[i]);
    if (i > 0) s += "*x^" + std::to_string(i);
  }
  return s;
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

bool fp_poly_irreducible(int p, const std::vector<int>& m, std::string* witness) {
  FpPoly mm = m;
  fp_trim(mm);
  int e = int(mm.size()) - 1;
  if (e < 1) {
    if (witness) *witness = "modulus must have positive degree";
    return false;
  }
  if (e == 1) return true;
  FpPoly x = {0, 1};
  // x^(p^e) == x mod m, and gcd(x^(p^(e/l)) - x, m) == 1 for prime l | e.
  FpPoly xp = x;
  for (int k = 0; k < e; ++k) xp = fp_powmod(xp, p, mm, p);
  FpPoly diff = xp;
  diff.resize(std::max(diff.size(), size_t(2)), 0);
  diff[1] = ((diff[1] - 1) % p + p) % p;
  fp_trim(diff);
  if (!diff.empty()) {
    if (witness) *witness = "x^(p^e) != x mod m";
    return false;
  }
  for (int l = 2; l <= e; ++l) {
    if (e % l != 0 || !is_prime(l)) continue;
    FpPoly y = x;
    for (int k = 0; k < e / l; ++k) y = fp_powmod(y, p, mm, p);
    FpPoly d = y;
    d.resize(std::max(d.size(), size_t(2)), 0);
    d[1] = ((d[1] - 1) % p + p) % p;
    fp_trim(d);
    FpPoly g = fp_gcd(d, mm, p);
    if (int(g.size()) - 1 != 0) {
      if (witness) *witness = "nontrivial factor: gcd(x^(p^(e/" + std::to_string(l) + ")) - x, m) = " + fp_poly_str(g);
      return false;
    }
  }
  return true;
}

FqCtx::FqCtx(int p, int e, std::vector<int> modulus) : p_(p), e_(e), mod_(std::move(modulus)) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
  if (e < 1) throw std::invalid_argument("field extension degree must be >= 1");
  long long q = 1;
  for (int i = 0; i < e; ++i) {
    q *= p;
    if (q > 1024) throw std::invalid_argument("field size above supported bound 1024");
  }
  q_ = int(q);
  for (int& c : mod_) c = ((c % p) + p) % p;
  if (int(mod_.size()) != e + 1 || mod_.back() != 1)
    throw std::invalid_argument("modulus must be monic of degree e");
  std::string w;
  if (!fp_poly_irreducible(p_, mod_, &w)) throw std::invalid_argument("modulus reducible: " + w);

  // Element index <-> coefficient vector is base-p packing; arithmetic tables
  // are built from dense F_p[x] operations once.
  auto decode = [&](uint16_t v) {
    FpPoly c(e_);
    for (int i = 0; i < e_; ++i) {
      c[i] = v % p_;
      v = uint16_t(v / p_);
    }
    fp_trim(c);
    return c;
  };
  auto encode = [&](const FpPoly& c) {
    long long v = 0, pw = 1;
    for (size_t i = 0; i < c.size(); ++i) {
      v += c[i] * pw;
      pw *= p_;
    }
    return uint16_t(v);
  };

  add_.resize(size_t(q_) * q_);
  mul_.resize(size_t(q_) * q_);
  neg_.resize(q_);
  inv_.assign(q_, 0);
  frob_.resize(q_);
  for (int a = 0; a < q_; ++a) {
    FpPoly ca = decode(uint16_t(a));
    FpPoly na = ca;
    for (int& c : na) c = (p_ - c) % p_;
    fp_trim(na);
    neg_[a] = encode(na);
    for (int b = 0; b < q_; ++b) {
      FpPoly cb = decode(uint16_t(b));
      FpPoly s = ca;
      s.resize(std::max(ca.size(), cb.size()), 0);
      for (size_t i = 0; i < cb.size(); ++i) s[i] = (s[i] + cb[i]) % p_;
      fp_trim(s);
      add_[idx(uint16_t(a), uint16_t(b))] = encode(s);
      mul_[idx(uint16_t(a), uint16_t(b))] = encode(fp_mulmod(ca, cb, mod_, p_));
    }
  }
  for (int a = 1; a < q_; ++a) {
    FpPoly ca = decode(uint16_t(a));
    inv_[a] = encode(fp_powmod(ca, (long long)q_ - 2, mod_, p_));
    frob_[a] = encode(fp_powmod(ca, p_, mod_, p_));
  }
  frob_[0] = 0;
}

uint16_t FqCtx::inv(uint16_t a) const {
  if (a == 0) throw std::domain_error("division by zero in F_q");
  return inv_[a];
}

uint16_t FqCtx::pow(uint16_t a, long long n) const {
  if (n < 0) {
    a = inv(a);
    n = -n;
  }
  if (a == 0) return n == 0 ? one() : 0;
  // exponents act through the cyclic group of order q-1
  n %= (q_ - 1);
  uint16_t acc = 1, b = a;
  while (n > 0) {
    if (n & 1) acc = mul(acc, b);
    b = mul(b, b);
    n >>= 1;
  }
  return acc;
}

uint16_t FqCtx::from_int(long long n) const {
  long long r = n % p_;
  if (r < 0) r += p_;
  return uint16_t(r);
}

std::vector<int> FqCtx::rep(uint16_t a) const {
  std::vector<int> c(e_);
  for (int i = 0; i < e_; ++i) {
    c[i] = a % p_;
    a = uint16_t(a / p_);
  }
  return c;
}

const FqCtx& FqCtx::builtin(int q) {
  static std::mutex mu;
  static std::map<int, const FqCtx*> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return *it->second;
  const FqCtx* ctx = nullptr;
  switch (q) {
    case 2: ctx = new FqCtx(2, 1, {0, 1}); break;
    case 3: ctx = new FqCtx(3, 1, {0, 1}); break;
    case 5: ctx = new FqCtx(5, 1, {0, 1}); break;
    case 4: ctx = new FqCtx(2, 2, {1, 1, 1}); break;        // x^2 + x + 1
    case 8: ctx = new FqCtx(2, 3, {1, 1, 0, 1}); break;     // x^3 + x + 1
    case 9: ctx = new FqCtx(3, 2, {1, 0, 1}); break;        // x^2 + 1
    default: throw std::invalid_argument("no built-in modulus for q = " + std::to_string(q));
  }
  cache[q] = ctx;
  return *ctx;
}

}  // namespace cmzv
