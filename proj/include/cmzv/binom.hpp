#pragma once

#include "cmzv/field.hpp"

namespace cmzv {

// C(n, k) mod p by Lucas' rule: product of digitwise binomials base p.
inline int binom_mod_p(long long n, long long k, int p) {
  if (k < 0 || n < 0 || k > n) return 0;
  long long r = 1;
  while (n > 0 || k > 0) {
    long long nd = n % p, kd = k % p;
    if (kd > nd) return 0;
    // C(nd, kd) mod p with nd, kd < p
    long long num = 1, den = 1;
    for (long long i = 0; i < kd; ++i) {
      num = num * ((nd - i) % p) % p;
      den = den * ((i + 1) % p) % p;
    }
    // den invertible mod p
    long long dinv = 1, e = p - 2, b = den;
    while (e > 0) {
      if (e & 1) dinv = dinv * b % p;
      b = b * b % p;
      e >>= 1;
    }
    r = r * (num * dinv % p) % p;
    n /= p;
    k /= p;
  }
  return int(r);
}

inline uint16_t binom_fq(const FqCtx& F, long long n, long long k) {
  return F.from_int(binom_mod_p(n, k, F.p()));
}

}  // namespace cmzv
