#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cmzv/polylog.hpp"
#include "cmzv/special.hpp"

namespace cmzv {

// Jet at t = theta of the deformed zeta series: the chain sum over strictly
// decreasing twist tuples i_1 > ... > i_r >= 0 of
//   prod_k H_{s_k - 1}^(i_k) / LL_{i_k}^{s_k}.
// Coefficient 0 equals Gamma_s * zeta(s) to the certified precision.
struct ZetaSeriesJet {
  Index s;
  int order;           // jet length
  long long cutoff;    // cap on the top chain index
  long long tail_ord;  // certified ord floor of everything omitted
  Jet<LaurentNumber> value;
};

ZetaSeriesJet zeta_series_jet(SpecialCache& SC, PolylogCache& PC,
                              const Index& s, int order, long long prec);

// One choice of t-exponents from the expansion of each H_{s_i - 1} in t:
// the coefficient point u and the monomial t^tdeg it multiplies.
struct CoeffTerm {
  std::vector<int> j;
  PointTuple u;
  int tdeg;
};

struct CoeffExpansion {
  std::vector<int> degree;      // deg_t of H_{s_i - 1} per coordinate
  std::vector<CoeffTerm> terms; // lexicographic, last coordinate fastest
};

// Expands every H_{s_i - 1} in powers of t and forms the product set of
// exponent choices; zero coefficients are kept (their chain sums vanish).
CoeffExpansion expand_coefficients(SpecialCache& SC, const Index& s);

struct StarTerm {
  Index s;
  PointTuple u;
  uint16_t sign;  // field element (+-1)
};

// Inclusion-exclusion rewriting the strict chain sum through weak (star)
// chain sums: one term per split of the coordinates into consecutive
// blocks, with summed exponents, multiplied points, and sign (-1)^(r - k)
// for k blocks.  The unsplit-into-singletons term comes first.
std::vector<StarTerm> star_convert(const Index& s, const PointTuple& u);

struct Triple {
  UniPoly b;  // in t; absorbs the global sign (-1)^(r - 1)
  Index s;
  PointTuple u;
};

// Expansion of the deformed zeta series into star chain sums:
//   zeta_series(s) = sum_l b_l(t) (-1)^(dep(s_l) - 1) star-chain(s_l, u_l),
// with like (index, point) keys collected in first-occurrence order and
// depth-one triples listed first.
struct Decomposition {
  Index source;
  std::vector<Triple> triples;
  int split;  // number of depth-one triples
  long long checked_prec;
};

// Builds the decomposition and verifies it, both as a jet identity against
// zeta_series_jet and, at t = theta, against the direct zeta sum scaled by
// Gamma_s.  Verification failures are hard errors.
Decomposition decompose(SpecialCache& SC, PolylogCache& PC, const Index& s,
                        long long prec);

// Right-hand side of the product expansion
//   zeta(s1) zeta(s2) = zeta(s1,s2) + zeta(s2,s1) + zeta(s1+s2)
//     + sum over i + j = s1 + s2, (q-1) | j, i >= 1 of
//       [(-1)^(s1-1) C(j-1, s1-1) + (-1)^(s2-1) C(j-1, s2-1)] zeta(i, j),
// binomials mod p, like indexes collected, zero coefficients dropped.
struct ZetaProduct {
  std::vector<std::pair<uint16_t, Index>> terms;
  // set when the excluded i = 0 boundary term has a nonzero coefficient
  bool boundary_dropped;
};

ZetaProduct zeta_product(const FqCtx& F, int s1, int s2);

}  // namespace cmzv
