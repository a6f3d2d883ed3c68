#include "cmzv/coproduct.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>
#include <thread>

namespace cmzv {

namespace {

LaurentNumber laur(const RatFunc& x, long long prec) {
  if (x.is_zero()) return LaurentNumber::zero_to(x.field(), prec);
  if (x.is_poly()) return LaurentNumber::from_unipoly(x.num());
  return laurent_from_ratfunc(x, prec);
}

// b(t) as an exact jet at t = theta
Jet<LaurentNumber> scale_jet(const UniPoly& b, int len) {
  const FqCtx& F = b.field();
  Jet<RatFunc> jr = jet_from_bipoly(BiPoly::from_t(b), len);
  std::vector<LaurentNumber> c;
  c.reserve(size_t(len));
  for (int a = 0; a < len; ++a)
    c.push_back(jr.coeff(a).is_zero()
                    ? LaurentNumber::exact_zero(F)
                    : LaurentNumber::from_unipoly(jr.coeff(a).num()));
  return Jet<LaurentNumber>(std::move(c));
}

// One glued summand: a triple or a gamma-scaled term module constituent.
struct Branch {
  Index s;        // index of the triple, unreversed
  PointTuple u;   // point of the triple, unreversed
  UniPoly scale;  // polynomial in t applied through the t-action
  TModule* part;  // module built on the reversed data
  int off;        // glued offset of the lower block, -1 for depth one
  int ordinal;    // 1-based label number
};

// Certified logarithm of the branch module at its special point, pushed
// through the differential of its scale polynomial.
std::vector<LaurentNumber> branch_log(PolylogCache& pc, const Branch& br,
                                      long long pprec) {
  LogPaths lp = logformula_series(pc, *br.part, pprec);
  Mat<RatFunc> dr = d_rho(*br.part, BiPoly::from_t(br.scale));
  const FqCtx& F = br.part->field();
  const int n = br.part->dim();
  std::vector<LaurentNumber> out;
  out.reserve(size_t(n));
  for (int i = 0; i < n; ++i) {
    LaurentNumber acc = LaurentNumber::exact_zero(F);
    for (int j = 0; j < n; ++j) {
      const RatFunc& e = dr.at(i, j);
      if (e.is_zero()) continue;
      acc = acc + laur(e, pprec) * lp.series[size_t(j)];
    }
    out.push_back(std::move(acc));
  }
  return out;
}

// Closed-form lower block of one branch: block i of the scaled logarithm
// lists the descending jet coefficients of scale(t) times the star
// polylogarithm of the length-(blocks - i + 1) prefix of (s, u), carrying
// the parity sign of the prefix depth.
void branch_closed(PolylogCache& pc, const Branch& br, long long pprec,
                   std::vector<LaurentNumber>& out) {
  if (br.off < 0) return;
  const TModule& G = *br.part;
  const FqCtx& F = G.field();
  const int w = G.block_dim(1);
  const int nb = G.block_count();
  for (int i = 2; i <= nb; ++i) {
    const int len = nb - i + 1;
    Index ps(std::vector<int>(br.s.parts().begin(),
                              br.s.parts().begin() + len));
    PointTuple pu(std::vector<RatFunc>(br.u.entries().begin(),
                                       br.u.entries().begin() + len));
    const int di = G.block_dim(i);
    PolylogJet pj = cmspl_jet(pc, ps, pu, di, pprec);
    Jet<LaurentNumber> full =
        (scale_jet(br.scale, di) * pj.value).scaled(F.sign(nb - i));
    const int start = br.off + G.block_start(i) - w;
    for (int z = 0; z < di; ++z)
      out[size_t(start + z)] = full.coeff(di - 1 - z);
  }
}

// Branch work is independent: each branch gets a private factor cache and
// writes only its own slots.  Failures rethrow in branch order.
void run_branches(const FqCtx& F, const std::vector<Branch>& brs,
                  long long pprec,
                  std::vector<std::vector<LaurentNumber>>& logs,
                  std::vector<LaurentNumber>& closed) {
  const size_t T = brs.size();
  logs.assign(T, {});
  std::vector<std::exception_ptr> errs(T);
  auto work = [&](size_t b) {
    try {
      PolylogCache pc(F);
      logs[b] = branch_log(pc, brs[b], pprec);
      branch_closed(pc, brs[b], pprec, closed);
    } catch (...) {
      errs[b] = std::current_exception();
    }
  };
  if (T == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(T);
    for (size_t b = 0; b < T; ++b) pool.emplace_back(work, b);
    for (std::thread& th : pool) th.join();
  }
  for (size_t b = 0; b < T; ++b)
    if (errs[b]) std::rethrow_exception(errs[b]);
}

std::vector<std::string> coord_labels(int dim, int w,
                                      const std::vector<Branch>& brs) {
  std::vector<std::string> lb(static_cast<size_t>(dim));
  for (int z = 0; z < w; ++z)
    lb[size_t(z)] = "atseries-jet " + std::to_string(w - 1 - z);
  for (const Branch& br : brs) {
    if (br.off < 0) continue;
    const int len = br.part->dim() - w;
    for (int z = 0; z < len; ++z)
      lb[size_t(br.off + z)] = "minus-block " + std::to_string(br.ordinal);
  }
  return lb;
}

// Shared verification tail: per-coordinate route agreement, the center
// coordinate against an independent numeric target, and the exponential
// against the special point.  All failures carry coordinate diagnostics.
LogVectorReport finish_z(TModule& glued, int w,
                         std::vector<LaurentNumber> assembled,
                         std::vector<LaurentNumber> closed,
                         std::vector<std::string> labels,
                         const std::vector<RatFunc>& v,
                         const LaurentNumber& center, long long prec) {
  const int dim = glued.dim();
  LogVectorReport rep;
  rep.prec = prec;
  rep.labels = std::move(labels);
  rep.agreement.reserve(size_t(dim));
  for (int i = 0; i < dim; ++i) {
    long long a = agreement_prec(assembled[size_t(i)], closed[size_t(i)]);
    rep.agreement.push_back(a);
    if (a < prec)
      throw std::logic_error(
          "log vector routes disagree at coordinate " + std::to_string(i + 1) +
          " (" + rep.labels[size_t(i)] + "): agreement " + std::to_string(a) +
          ", required " + std::to_string(prec));
  }
  if (agreement_prec(assembled[size_t(w - 1)], center) < prec - 10)
    throw std::logic_error(
        "center coordinate of the log vector disagrees with the direct zeta "
        "sum");
  PointEval pe = exp_eval(glued, assembled, prec);
  for (int i = 0; i < dim; ++i) {
    long long a =
        agreement_prec(pe.value[size_t(i)], laur(v[size_t(i)], prec + 5));
    if (a < prec - 20)
      throw std::logic_error(
          "exponential of the log vector misses the special point at "
          "coordinate " +
          std::to_string(i + 1) + " (" + rep.labels[size_t(i)] +
          "): agreement " + std::to_string(a));
  }
  rep.z.reserve(size_t(dim));
  rep.closed.reserve(size_t(dim));
  for (int i = 0; i < dim; ++i) {
    rep.z.push_back(assembled[size_t(i)].truncate(prec));
    rep.closed.push_back(closed[size_t(i)].truncate(prec));
  }
  return rep;
}

}  // namespace

TModule glue_over_carlitz(const FqCtx& F, int w,
                          const std::vector<const TModule*>& parts) {
  if (w < 1 || parts.empty())
    throw std::invalid_argument(
        "glue needs a positive shared block and at least one part");
  TModule ct = carlitz_tensor(F, w);
  const TwistedMatrix& top = ct.rho_t();
  int kmax = top.tau_degree();
  for (const TModule* p : parts) {
    if (p->block_dim(1) != w)
      throw std::invalid_argument(
          "constituent top block mismatch: expected dimension " +
          std::to_string(w) + ", got " + std::to_string(p->block_dim(1)));
    kmax = std::max(kmax, p->rho_t().tau_degree());
  }
  for (const TModule* p : parts) {
    const int n = p->dim();
    for (int k = 0; k <= kmax; ++k) {
      Mat<RatFunc> mk = p->rho_t().coeff(k);
      Mat<RatFunc> tk = top.coeff(k);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < w; ++j) {
          if (i < w) {
            if (mk.at(i, j) != tk.at(i, j))
              throw std::invalid_argument(
                  "constituent does not carry the shared Carlitz action as "
                  "its top block");
          } else if (!mk.at(i, j).is_zero()) {
            throw std::invalid_argument(
                "constituent couples its lower block back into the shared "
                "rows");
          }
        }
    }
  }
  int dim = w;
  std::vector<int> blocks{w};
  for (const TModule* p : parts) {
    dim += p->dim() - w;
    for (int b = 2; b <= p->block_count(); ++b)
      blocks.push_back(p->block_dim(b));
  }
  TwistedMatrix rho(F, dim, dim);
  const RatFunc zero = RatFunc::zero(F, Var::theta);
  for (int k = 0; k <= kmax; ++k) {
    Mat<RatFunc> big(dim, dim, zero);
    Mat<RatFunc> tk = top.coeff(k);
    for (int i = 0; i < w; ++i)
      for (int j = 0; j < w; ++j) big.at(i, j) = tk.at(i, j);
    int off = w;
    for (const TModule* p : parts) {
      const int n = p->dim();
      if (n == w) continue;
      Mat<RatFunc> mk = p->rho_t().coeff(k);
      for (int i = 0; i < w; ++i)
        for (int j = w; j < n; ++j) big.at(i, off + j - w) = mk.at(i, j);
      for (int i = w; i < n; ++i)
        for (int j = w; j < n; ++j)
          big.at(off + i - w, off + j - w) = mk.at(i, j);
      off += n - w;
    }
    rho.add_term(big, k);
  }
  return TModule(F, std::move(blocks), std::move(rho));
}

CoproductModule build_coproduct(const FqCtx& F, const Decomposition& dec) {
  if (dec.triples.empty())
    throw std::invalid_argument("decomposition has no triples");
  const int w = dec.source.weight();
  std::vector<TModule> parts;
  parts.reserve(dec.triples.size());
  for (const Triple& tr : dec.triples)
    parts.push_back(build_module(F, tr.s.reversed(), tr.u.reversed()));
  std::vector<const TModule*> ptrs;
  ptrs.reserve(parts.size());
  for (const TModule& p : parts) ptrs.push_back(&p);
  TModule glued = glue_over_carlitz(F, w, ptrs);
  std::vector<int> offs;
  int off = w;
  for (const TModule& p : parts) {
    if (p.dim() == w) {
      offs.push_back(-1);
    } else {
      offs.push_back(off);
      off += p.dim() - w;
    }
  }
  return CoproductModule{dec, std::move(parts), std::move(glued), w,
                         std::move(offs)};
}

std::vector<RatFunc> coproduct_point(const CoproductModule& cop) {
  const FqCtx& F = cop.glued.field();
  const int w = cop.top;
  std::vector<RatFunc> v(size_t(cop.glued.dim()), RatFunc::zero(F, Var::theta));
  for (size_t l = 0; l < cop.parts.size(); ++l) {
    const TModule& G = cop.parts[l];
    std::vector<RatFunc> img =
        rho_poly(G, cop.source.triples[l].b).apply(G.special_point());
    for (int z = 0; z < w; ++z) v[size_t(z)] = v[size_t(z)] + img[size_t(z)];
    const int off = cop.minus_off[l];
    for (int z = w; z < G.dim(); ++z) v[size_t(off + z - w)] = img[size_t(z)];
  }
  return v;
}

LogVectorReport z_vector(CoproductModule& cop, SpecialCache& SC,
                         PolylogCache& PC, long long prec) {
  if (prec < 1) throw std::invalid_argument("precision must be positive");
  const FqCtx& F = cop.glued.field();
  const int w = cop.top;
  const int dim = cop.glued.dim();
  std::vector<Branch> brs;
  brs.reserve(cop.parts.size());
  long long degmax = 0;
  for (size_t l = 0; l < cop.parts.size(); ++l) {
    const Triple& tr = cop.source.triples[l];
    brs.push_back(
        Branch{tr.s, tr.u, tr.b, &cop.parts[l], cop.minus_off[l], int(l) + 1});
    degmax = std::max<long long>(degmax, tr.b.deg());
  }
  const long long pprec = prec + 30 + degmax;

  std::vector<LaurentNumber> closed(size_t(dim),
                                    LaurentNumber::exact_zero(F));
  std::vector<std::vector<LaurentNumber>> logs;
  run_branches(F, brs, pprec, logs, closed);

  ZetaSeriesJet zs = zeta_series_jet(SC, PC, cop.source.source, w, prec);
  for (int z = 0; z < w; ++z) closed[size_t(z)] = zs.value.coeff(w - 1 - z);

  std::vector<LaurentNumber> assembled(size_t(dim),
                                       LaurentNumber::exact_zero(F));
  for (size_t b = 0; b < brs.size(); ++b) {
    for (int z = 0; z < w; ++z)
      assembled[size_t(z)] = assembled[size_t(z)] + logs[b][size_t(z)];
    const int off = brs[b].off;
    const int n = brs[b].part->dim();
    for (int z = w; z < n; ++z)
      assembled[size_t(off + z - w)] = logs[b][size_t(z)];
  }

  UniPoly g = SC.gamma_index(cop.source.source);
  const long long pz = prec + g.deg() + 5;
  LaurentNumber center =
      LaurentNumber::from_unipoly(g) *
      zeta_bruteforce(SC, cop.source.source,
                      zeta_degree_cutoff(SC, cop.source.source, pz), pz);

  return finish_z(cop.glued, w, std::move(assembled), std::move(closed),
                  coord_labels(dim, w, brs), coproduct_point(cop), center,
                  prec);
}

MonomialReport monomial_module(
    SpecialCache& SC, PolylogCache& PC, const std::vector<Index>& factors,
    const std::vector<std::pair<uint16_t, Index>>& expansion, long long prec) {
  const FqCtx& F = SC.field();
  if (factors.empty()) throw std::invalid_argument("no factors");
  if (expansion.empty()) throw std::invalid_argument("empty expansion");
  int w = 0;
  for (const Index& k : factors) w += k.weight();
  for (size_t i = 0; i < expansion.size(); ++i) {
    if (expansion[i].first == 0)
      throw std::invalid_argument("expansion carries a zero coefficient");
    if (expansion[i].second.weight() != w)
      throw std::invalid_argument(
          "expansion term weight differs from the factor weight");
    for (size_t j = i + 1; j < expansion.size(); ++j)
      if (expansion[i].second == expansion[j].second)
        throw std::invalid_argument("expansion repeats an index");
  }

  std::vector<UniPoly> gammas;
  gammas.reserve(expansion.size());
  for (const auto& term : expansion)
    gammas.push_back(SC.gamma_index(term.second));
  std::vector<UniPoly> scale;
  scale.reserve(expansion.size());
  for (size_t i = 0; i < expansion.size(); ++i) {
    UniPoly c = UniPoly::constant(F, Var::theta, expansion[i].first);
    for (size_t j = 0; j < expansion.size(); ++j)
      if (j != i) c = c * gammas[j];
    scale.push_back(c.with_var(Var::t));
  }

  std::vector<CoproductModule> cons;
  cons.reserve(expansion.size());
  std::vector<LogVectorReport> reps;
  reps.reserve(expansion.size());
  for (size_t i = 0; i < expansion.size(); ++i) {
    Decomposition dec = decompose(SC, PC, expansion[i].second, prec);
    cons.push_back(build_coproduct(F, dec));
    reps.push_back(
        z_vector(cons.back(), SC, PC, prec + 30 + scale[i].deg()));
  }

  std::vector<const TModule*> ptrs;
  ptrs.reserve(cons.size());
  for (const CoproductModule& c : cons) ptrs.push_back(&c.glued);
  TModule glued = glue_over_carlitz(F, w, ptrs);
  const int dim = glued.dim();

  std::vector<int> offs;
  int off = w;
  for (const CoproductModule& c : cons) {
    offs.push_back(off);
    off += c.glued.dim() - w;
  }

  // special point and assembled log vector through the outer projection
  std::vector<RatFunc> v(size_t(dim), RatFunc::zero(F, Var::theta));
  std::vector<LaurentNumber> assembled(size_t(dim),
                                       LaurentNumber::exact_zero(F));
  const long long mprec = prec + 30;
  for (size_t i = 0; i < cons.size(); ++i) {
    const TModule& big = cons[i].glued;
    std::vector<RatFunc> img =
        rho_poly(big, scale[i]).apply(coproduct_point(cons[i]));
    Mat<RatFunc> dr = d_rho(big, BiPoly::from_t(scale[i]));
    const int n = big.dim();
    std::vector<LaurentNumber> zi(size_t(n), LaurentNumber::exact_zero(F));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const RatFunc& e = dr.at(a, b);
        if (e.is_zero()) continue;
        zi[size_t(a)] = zi[size_t(a)] + laur(e, mprec) * reps[i].z[size_t(b)];
      }
    for (int z = 0; z < w; ++z) {
      v[size_t(z)] = v[size_t(z)] + img[size_t(z)];
      assembled[size_t(z)] = assembled[size_t(z)] + zi[size_t(z)];
    }
    for (int z = w; z < n; ++z) {
      v[size_t(offs[i] + z - w)] = img[size_t(z)];
      assembled[size_t(offs[i] + z - w)] = zi[size_t(z)];
    }
  }

  // closed form: gamma-scaled zeta jets on top, prefix star polylogarithm
  // jets below, with the scale polynomials folded into each branch
  std::vector<LaurentNumber> closed(size_t(dim), LaurentNumber::exact_zero(F));
  Jet<LaurentNumber> topjet =
      Jet<LaurentNumber>::zero(LaurentNumber::zero_to(F, prec + 10), w);
  for (size_t i = 0; i < cons.size(); ++i) {
    ZetaSeriesJet zi = zeta_series_jet(SC, PC, expansion[i].second, w,
                                       prec + scale[i].deg());
    topjet = topjet + scale_jet(scale[i], w) * zi.value;
  }
  for (int z = 0; z < w; ++z) closed[size_t(z)] = topjet.coeff(w - 1 - z);

  std::vector<Branch> brs;
  int ordinal = 0;
  for (size_t i = 0; i < cons.size(); ++i)
    for (size_t l = 0; l < cons[i].parts.size(); ++l) {
      const Triple& tr = cons[i].source.triples[l];
      const int ioff = cons[i].minus_off[l];
      ++ordinal;
      if (ioff < 0) continue;
      brs.push_back(Branch{tr.s, tr.u, scale[i] * tr.b, &cons[i].parts[l],
                           offs[i] + ioff - w, ordinal});
    }
  for (const Branch& br : brs)
    branch_closed(PC, br, prec + 30 + br.scale.deg(), closed);

  // label top rows, then lower blocks by their flattened ordinal
  std::vector<std::string> labels = coord_labels(dim, w, brs);

  // the center must carry the gamma-scaled product of the factor values
  UniPoly gp = UniPoly::one(F, Var::theta);
  for (const UniPoly& g : gammas) gp = gp * g;
  const long long pz = prec + gp.deg() + 10;
  LaurentNumber center = LaurentNumber::from_unipoly(gp);
  for (const Index& k : factors)
    center = center *
             zeta_bruteforce(SC, k, zeta_degree_cutoff(SC, k, pz), pz);

  LogVectorReport z =
      finish_z(glued, w, std::move(assembled), std::move(closed),
               std::move(labels), v, center, prec);
  return MonomialReport{factors,          expansion, scale,
                        std::move(cons),  std::move(glued),
                        std::move(v),     std::move(z)};
}

MonomialReport monomial_module(SpecialCache& SC, PolylogCache& PC,
                               const std::vector<Index>& factors,
                               long long prec) {
  const FqCtx& F = SC.field();
  if (factors.size() == 1) {
    return monomial_module(SC, PC, factors, {{uint16_t(1), factors[0]}},
                           prec);
  }
  if (factors.size() == 2 && factors[0].depth() == 1 &&
      factors[1].depth() == 1) {
    ZetaProduct zp = zeta_product(F, factors[0].at(1), factors[1].at(1));
    return monomial_module(SC, PC, factors, zp.terms, prec);
  }
  throw std::invalid_argument(
      "no built-in expansion for these factors; supply one explicitly");
}

}  // namespace cmzv
