#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cmzv {

// Arithmetic context for F_q, q = p^e, realized as F_p[x]/(m(x)) with m monic
// irreducible of degree e.  Element values are indices in [0, q): the base-p
// packing of the coordinate vector (c_0, ..., c_{e-1}) relative to m.
// Contexts are immutable after construction; operations are table-driven.
class FqCtx {
public:
  // modulus holds m as coefficients c_0..c_e (monic, degree e).  For e = 1 the
  // modulus is x, i.e. {0, 1}.
  FqCtx(int p, int e, std::vector<int> modulus);

  // Shared context with a fixed built-in modulus for q in {2,3,4,5,8,9}.
  static const FqCtx& builtin(int q);

  int p() const { return p_; }
  int e() const { return e_; }
  int q() const { return q_; }
  const std::vector<int>& modulus() const { return mod_; }

  uint16_t zero() const { return 0; }
  uint16_t one() const { return 1; }
  uint16_t add(uint16_t a, uint16_t b) const { return add_[idx(a, b)]; }
  uint16_t sub(uint16_t a, uint16_t b) const { return add_[idx(a, neg_[b])]; }
  uint16_t neg(uint16_t a) const { return neg_[a]; }
  uint16_t mul(uint16_t a, uint16_t b) const { return mul_[idx(a, b)]; }
  uint16_t inv(uint16_t a) const;
  uint16_t div(uint16_t a, uint16_t b) const { return mul(a, inv(b)); }
  uint16_t pow(uint16_t a, long long n) const;
  uint16_t frob_p(uint16_t a) const { return frob_[a]; }  // a^p
  uint16_t from_int(long long n) const;                   // image of n via F_p
  uint16_t sign(long long k) const { return (k & 1) ? neg_[1] : 1; }  // (-1)^k
  std::vector<int> rep(uint16_t a) const;                 // base-p digits, length e

  // Same field iff same characteristic and same modulus.
  bool same(const FqCtx& o) const { return p_ == o.p_ && mod_ == o.mod_; }

private:
  size_t idx(uint16_t a, uint16_t b) const { return size_t(a) * q_ + b; }

  int p_, e_, q_;
  std::vector<int> mod_;
  std::vector<uint16_t> add_, mul_, neg_, inv_, frob_;
};

// Irreducibility test for a candidate modulus over F_p.  On failure *witness
// describes the violated condition (e.g. a nontrivial factor).
bool fp_poly_irreducible(int p, const std::vector<int>& m, std::string* witness);

}  // namespace cmzv
