#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cmzv/decomp.hpp"
#include "cmzv/tmodule.hpp"

namespace cmzv {

// Glue t-modules sharing the weight-w Carlitz power as their first block:
// the glued t-action keeps one copy of the shared top block, stacks the
// remaining diagonal blocks, and keeps each part's coupling columns against
// the shared rows.  Every part must carry the w-dimensional Carlitz action
// as its exact upper left block with nothing below it; violations are hard
// failures.
TModule glue_over_carlitz(const FqCtx& F, int w,
                          const std::vector<const TModule*>& parts);

// Fiber coproduct attached to a decomposition: one constituent module per
// triple, built on the reversed index and point, glued over the shared
// weight block.
struct CoproductModule {
  Decomposition source;
  std::vector<TModule> parts;  // one per triple, in triple order
  TModule glued;
  int top = 0;                  // shared block dimension, the source weight
  std::vector<int> minus_off;   // per triple: offset of its lower block in
                                // the glued coordinates, -1 for depth one
};

CoproductModule build_coproduct(const FqCtx& F, const Decomposition& dec);

// Special point of the glued module: the projection of rho_l(b_l(t))
// applied to each constituent's special point; exact over A.
std::vector<RatFunc> coproduct_point(const CoproductModule& cop);

// Logarithm vector of the glued module at its special point, assembled
// through the projection differential from certified constituent
// logarithms, together with an independently computed closed form: the top
// block lists descending jet coefficients of the deformed zeta series, the
// lower blocks descending jet coefficients of the scaled star
// polylogarithms of the index prefixes.  Construction is a hard failure
// unless the routes agree coordinatewise, the center coordinate matches
// the direct zeta sum, and the exponential returns the special point.
struct LogVectorReport {
  std::vector<LaurentNumber> z;       // assembled coordinates
  std::vector<LaurentNumber> closed;  // closed-form coordinates
  std::vector<std::string> labels;    // provenance per coordinate
  std::vector<long long> agreement;   // per-coordinate agreement order
  long long prec = 0;
};

LogVectorReport z_vector(CoproductModule& cop, SpecialCache& SC,
                         PolylogCache& PC, long long prec);

// Monomial of zeta values as one coordinate of a logarithm: expands the
// product into weight-w indexes, decomposes and glues each term, scales by
// the complementary gamma factors, and glues the term modules over the
// shared weight-w Carlitz power.  The w-th coordinate of z must match the
// gamma-scaled numeric product of the factors; the closed-form and
// exponential checks apply to the outer module as well.
struct MonomialReport {
  std::vector<Index> factors;
  std::vector<std::pair<uint16_t, Index>> expansion;  // (a_i, s_i) weight w
  std::vector<UniPoly> scale;                         // c_i, in t
  std::vector<CoproductModule> constituents;          // one per expansion term
  TModule glued;
  std::vector<RatFunc> v;
  LogVectorReport z;
};

// Built-in expansions cover a single factor of any depth and two depth-one
// factors (via the product formula); other shapes need an explicit
// expansion, supplied through the second overload and verified numerically
// like everything else.
MonomialReport monomial_module(SpecialCache& SC, PolylogCache& PC,
                               const std::vector<Index>& factors,
                               long long prec);
MonomialReport monomial_module(
    SpecialCache& SC, PolylogCache& PC, const std::vector<Index>& factors,
    const std::vector<std::pair<uint16_t, Index>>& expansion, long long prec);

}  // namespace cmzv
