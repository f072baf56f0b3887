#pragma once

#include "sesq/sheaf.hpp"

namespace sesq {

// ---------------------------------------------------------------------------
// Carrier sheaves: what remains of a module sheaf after ascending to the
// ring side. Restrictions are plain matrices; the action of the global
// sections ring is carried along so the cohomology groups come back as
// modules over the global sesquiad.
// ---------------------------------------------------------------------------

struct CarrierSheaf {
  SchemePtr scheme;
  std::vector<FgModule> at;                     // per point, no stalk action required
  std::map<std::pair<int, int>, IntMatrix> restrict_;
  std::vector<std::vector<IntMatrix>> global_action;  // [point][global ring basis]

  const IntMatrix& restriction(int x, int y) const {
    auto it = restrict_.find({x, y});
    require(it != restrict_.end(), Errc::unknown_reference, "no carrier restriction");
    return it->second;
  }
};

inline CarrierSheaf ascend(const ModuleSheaf& f) {
  CarrierSheaf c;
  c.scheme = f.scheme;
  int n = f.scheme->space.size();
  const ZAlgebra& rg = f.scheme->global->ring;
  for (int x = 0; x < n; ++x) {
    c.at.push_back(f.at[size_t(x)]->carrier);
    std::vector<IntMatrix> act;
    for (int r = 0; r < rg.rank(); ++r) {
      Vec rx = f.scheme->stalk[size_t(x)]->ring.reduce(
          f.scheme->to_stalk[size_t(x)].ring_map * unit_vec(rg.rank(), r));
      act.push_back(f.at[size_t(x)]->carrier.action_matrix(rx));
    }
    c.global_action.push_back(std::move(act));
  }
  for (const auto& [key, sem] : f.restrict_) c.restrict_.emplace(key, sem.ext);
  return c;
}

// Flabbiness: the restriction of global sections onto the sections over any
// open is surjective. On a finite poset this already forces all restriction
// maps between opens to be surjective.
inline bool is_flabby(const CarrierSheaf& c) {
  int n = c.scheme->space.size();
  std::vector<int> all;
  for (int x = 0; x < n; ++x) all.push_back(x);

  auto limit_of = [&](const std::vector<int>& pts) {
    // same limit computation as for module sheaves, carriers only
    int big = 0;
    std::vector<int> offset;
    for (int x : pts) {
      offset.push_back(big);
      big += c.at[size_t(x)].rank();
    }
    IntMatrix cons(0, big), cons_rel(0, 0);
    for (size_t xi = 0; xi < pts.size(); ++xi)
      for (size_t yi = 0; yi < pts.size(); ++yi) {
        int x = pts[xi], y = pts[yi];
        if (x == y || !c.scheme->space.leq(y, x)) continue;
        int ry = c.at[size_t(y)].rank();
        IntMatrix row(ry, big);
        const IntMatrix& r = c.restriction(x, y);
        for (int i = 0; i < ry; ++i) {
          for (int j = 0; j < r.cols(); ++j) row.at(i, offset[xi] + j) = r.at(i, j);
          row.at(i, offset[yi] + i) -= 1;
        }
        cons = vstack(cons, row);
        cons_rel = block_diag(cons_rel, c.at[size_t(y)].relations().basis());
      }
    IntMatrix prod_rel(0, 0);
    for (int x : pts) prod_rel = block_diag(prod_rel, c.at[size_t(x)].relations().basis());
    Lattice v = cons.rows() == 0
                    ? Lattice::from_columns(big, IntMatrix::identity(big))
                    : preimage_lattice(cons, Lattice::from_columns(cons.rows(), cons_rel));
    return std::tuple<IntMatrix, IntMatrix, std::vector<int>>(v.basis(), prod_rel, offset);
  };

  auto [ggens, gprod, goffset] = limit_of(all);
  for (const auto& u : c.scheme->space.all_opens()) {
    if (u.empty()) continue;
    auto [ugens, uprod, uoffset] = limit_of(u);
    // restriction of a global limit generator to the open
    IntMatrix mapped(uprod.rows() == 0 ? 0 : uprod.rows(), 0);
    int ubig = 0;
    for (int x : u) ubig += c.at[size_t(x)].rank();
    IntMatrix cols(ubig, ggens.cols());
    for (int j = 0; j < ggens.cols(); ++j) {
      Vec gv = ggens.col(j);
      int uo = 0;
      for (size_t ui = 0; ui < u.size(); ++ui) {
        int x = u[ui];
        int go = goffset[size_t(std::find(all.begin(), all.end(), x) - all.begin())];
        for (int t = 0; t < c.at[size_t(x)].rank(); ++t) cols.at(uo + t, j) = gv[size_t(go + t)];
        uo += c.at[size_t(x)].rank();
      }
    }
    (void)mapped;
    // surjective iff mapped generators plus section relations span the lattice
    IntMatrix span = hstack(cols, uprod);
    for (int j = 0; j < ugens.cols(); ++j)
      if (!solve(span, ugens.col(j)).has_value()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// The Godement resolution: stage zero is the product of skyscrapers of the
// stalks; each next stage repeats this on the pointwise cokernel. All stages
// are flabby and the construction truncates just past the dimension.
// ---------------------------------------------------------------------------

struct GodementStage {
  std::vector<FgModule> z_at;                      // the sheaf resolved at this stage
  std::map<std::pair<int, int>, IntMatrix> z_rest;
};

struct GodementComplex {
  std::vector<FgModule> gamma;       // global sections of C^k = product of stalks of Z^k
  std::vector<IntMatrix> diff;       // gamma[k] -> gamma[k+1]
  std::vector<std::vector<IntMatrix>> gamma_action;  // global ring action per stage
  int truncation = 0;
};

namespace detail {

// One Godement step: the pointwise cokernel of the diagonal into the product
// of the stalks over the down-set, compressed to a minimal presentation so
// stage ranks stay proportional to the actual groups.
struct NextStage {
  GodementStage stage;
  std::vector<IntMatrix> collect;   // per x: new coords from the block product
  std::vector<IntMatrix> from_new;  // per x: section back into the block product
  std::vector<std::vector<int>> down, off;
};

inline NextStage next_stage(const FiniteSpace& sp, const GodementStage& z) {
  int n = sp.size();
  NextStage out;
  out.down.resize(static_cast<size_t>(n));
  out.off.resize(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x) {
    out.down[size_t(x)] = sp.down_set(x);
    int big = 0;
    for (int y : out.down[size_t(x)]) {
      out.off[size_t(x)].push_back(big);
      big += z.z_at[size_t(y)].rank();
    }
    // cokernel of the diagonal z_x -> prod_{y <= x} z_y
    IntMatrix delta(big, z.z_at[size_t(x)].rank());
    IntMatrix rel(big, 0);
    for (size_t yi = 0; yi < out.down[size_t(x)].size(); ++yi) {
      int y = out.down[size_t(x)][yi];
      IntMatrix r = y == x ? IntMatrix::identity(z.z_at[size_t(x)].rank())
                           : z.z_rest.at({x, y});
      for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j)
          delta.at(out.off[size_t(x)][yi] + i, j) = r.at(i, j);
      IntMatrix pad(big, z.z_at[size_t(y)].relations().basis().cols());
      const IntMatrix& b = z.z_at[size_t(y)].relations().basis();
      for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) pad.at(out.off[size_t(x)][yi] + i, j) = b.at(i, j);
      rel = hstack(rel, pad);
    }
    CompressedPresentation cp = compress_presentation(FgModule(big, hstack(rel, delta)));
    out.stage.z_at.push_back(cp.mod);
    out.collect.push_back(cp.to_new);
    out.from_new.push_back(cp.from_new);
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y || !sp.leq(y, x)) continue;
      // project the blocks over down(x) onto the blocks over down(y), then
      // move through the compressed coordinates
      int bigx = out.from_new[size_t(x)].rows();
      int bigy = out.from_new[size_t(y)].rows();
      IntMatrix proj(bigy, bigx);
      for (size_t yi = 0; yi < out.down[size_t(y)].size(); ++yi) {
        int z2 = out.down[size_t(y)][yi];
        size_t xi = size_t(std::find(out.down[size_t(x)].begin(), out.down[size_t(x)].end(), z2) -
                           out.down[size_t(x)].begin());
        for (int t = 0; t < z.z_at[size_t(z2)].rank(); ++t)
          proj.at(out.off[size_t(y)][yi] + t, out.off[size_t(x)][xi] + t) = 1;
      }
      out.stage.z_rest.emplace(std::make_pair(x, y),
                               out.collect[size_t(y)] * proj * out.from_new[size_t(x)]);
    }
  return out;
}

}  // namespace detail

inline GodementComplex godement(const CarrierSheaf& c, int stages) {
  const FiniteSpace& sp = c.scheme->space;
  int n = sp.size();
  const ZAlgebra& rg = c.scheme->global->ring;
  GodementComplex out;
  out.truncation = stages;

  GodementStage z;
  z.z_at = c.at;
  for (const auto& [key, m] : c.restrict_) z.z_rest.emplace(key, m);
  std::vector<std::vector<IntMatrix>> z_action = c.global_action;

  for (int k = 0; k <= stages; ++k) {
    // gamma(C^k) = direct sum over x of Z^k_x
    IntMatrix rel(0, 0);
    std::vector<IntMatrix> act(size_t(rg.rank()), IntMatrix(0, 0));
    for (int x = 0; x < n; ++x) {
      rel = block_diag(rel, z.z_at[size_t(x)].relations().basis());
      for (int r = 0; r < rg.rank(); ++r)
        act[size_t(r)] = block_diag(act[size_t(r)], z_action[size_t(x)][size_t(r)]);
    }
    int big = rel.rows();
    out.gamma.push_back(FgModule(big, rel));
    out.gamma_action.push_back(act);

    if (k == stages) break;

    detail::NextStage nz = detail::next_stage(sp, z);
    // differential: component at x collects the tuple over the down-set and
    // passes to the compressed cokernel class
    {
      std::vector<int> src_off(static_cast<size_t>(n), 0), dst_off(static_cast<size_t>(n), 0);
      int s = 0, d = 0;
      for (int x = 0; x < n; ++x) {
        src_off[size_t(x)] = s;
        s += z.z_at[size_t(x)].rank();
        dst_off[size_t(x)] = d;
        d += nz.stage.z_at[size_t(x)].rank();
      }
      IntMatrix diff(d, s);
      for (int x = 0; x < n; ++x) {
        const IntMatrix& col = nz.collect[size_t(x)];
        for (size_t yi = 0; yi < nz.down[size_t(x)].size(); ++yi) {
          int y = nz.down[size_t(x)][yi];
          for (int i = 0; i < col.rows(); ++i)
            for (int t = 0; t < z.z_at[size_t(y)].rank(); ++t)
              diff.at(dst_off[size_t(x)] + i, src_off[size_t(y)] + t) =
                  col.at(i, nz.off[size_t(x)][yi] + t);
        }
      }
      out.diff.push_back(diff);
    }

    // action on the next stage: blockwise, conjugated into compressed coords
    std::vector<std::vector<IntMatrix>> nz_action;
    for (int x = 0; x < n; ++x) {
      std::vector<IntMatrix> ax;
      for (int r = 0; r < rg.rank(); ++r) {
        IntMatrix m(0, 0);
        for (int y : nz.down[size_t(x)]) m = block_diag(m, z_action[size_t(y)][size_t(r)]);
        ax.push_back(nz.collect[size_t(x)] * m * nz.from_new[size_t(x)]);
      }
      nz_action.push_back(std::move(ax));
    }
    z = std::move(nz.stage);
    z_action = std::move(nz_action);
  }
  return out;
}

// Cohomology of a complex of presented groups at position p.
struct GroupPresentation {
  FgModule group;
  IntMatrix cycle_gens;   // columns: cycle representatives of the generators
  Lattice boundary;       // boundaries plus ambient relations
};

inline GroupPresentation complex_cohomology(const FgModule& cur, const IntMatrix& d_out,
                                            const FgModule& next, const IntMatrix* d_in,
                                            const FgModule* prev) {
  Lattice cycles = preimage_lattice(d_out, next.relations());
  IntMatrix bnd = cur.relations().basis();
  if (d_in) {
    internal_check(prev != nullptr, "boundary data incomplete");
    bnd = hstack(bnd, *d_in);
  }
  Lattice boundary = Lattice::from_columns(cur.rank(), bnd);
  IntMatrix g = cycles.basis();
  Lattice rels = preimage_lattice(g, boundary);
  GroupPresentation out{FgModule(g.cols(), rels.basis()), g, boundary};
  return out;
}

inline Vec express_in_cohomology(const GroupPresentation& h, const Vec& cycle) {
  auto z = solve(hstack(h.cycle_gens, h.boundary.basis()), cycle);
  internal_check(z.has_value(), "vector is not a cycle");
  Vec out = zero_vec(h.group.rank());
  for (int i = 0; i < h.group.rank(); ++i) out[size_t(i)] = (*z)[size_t(i)];
  return h.group.reduce(out);
}

// ---------------------------------------------------------------------------
// The independent route: higher inverse limits over the poset, computed from
// the normalized cochain complex on strict chains.
// ---------------------------------------------------------------------------

inline std::vector<FgModule> higher_limit_oracle(const CarrierSheaf& c, int top_degree) {
  const FiniteSpace& sp = c.scheme->space;
  int n = sp.size();
  // strict chains z_0 < z_1 < ... < z_k, grouped by length
  std::vector<std::vector<std::vector<int>>> chains(size_t(top_degree) + 2);
  std::vector<int> cur;
  auto rec = [&](auto&& self, int last, int depth) -> void {
    if (depth > top_degree + 1) return;
    if (!cur.empty()) chains[size_t(cur.size() - 1)].push_back(cur);
    for (int next = 0; next < n; ++next) {
      if (last >= 0 && !(last != next && sp.leq(last, next))) continue;
      cur.push_back(next);
      self(self, next, depth + 1);
      cur.pop_back();
    }
  };
  rec(rec, -1, 0);

  // the cochain group in degree k is the product over k-chains of the value
  // at the smallest chain element
  std::vector<FgModule> cochain;
  std::vector<std::vector<int>> offsets;
  for (int k = 0; k <= top_degree + 1; ++k) {
    IntMatrix rel(0, 0);
    std::vector<int> off;
    int big = 0;
    for (const auto& ch : chains[size_t(k)]) {
      off.push_back(big);
      big += c.at[size_t(ch[0])].rank();
      rel = block_diag(rel, c.at[size_t(ch[0])].relations().basis());
    }
    cochain.push_back(FgModule(big, rel));
    offsets.push_back(off);
  }

  auto chain_index = [&](int k, const std::vector<int>& ch) {
    const auto& v = chains[size_t(k)];
    auto it = std::lower_bound(v.begin(), v.end(), ch);
    internal_check(it != v.end() && *it == ch, "chain missing");
    return int(it - v.begin());
  };

  std::vector<IntMatrix> diff;
  for (int k = 0; k <= top_degree; ++k) {
    IntMatrix d(cochain[size_t(k) + 1].rank(), cochain[size_t(k)].rank());
    for (int ci = 0; ci < int(chains[size_t(k) + 1].size()); ++ci) {
      const auto& ch = chains[size_t(k) + 1][size_t(ci)];
      int dst = offsets[size_t(k) + 1][size_t(ci)];
      for (int face = 0; face <= k + 1; ++face) {
        std::vector<int> sub;
        for (int t = 0; t < int(ch.size()); ++t)
          if (t != face) sub.push_back(ch[size_t(t)]);
        int src = offsets[size_t(k)][size_t(chain_index(k, sub))];
        int sign = face % 2 == 0 ? 1 : -1;
        if (face == 0) {
          // the face dropping the smallest element restricts the value
          const IntMatrix r = ch[0] == sub[0] ? IntMatrix::identity(c.at[size_t(sub[0])].rank())
                                              : c.restriction(sub[0], ch[0]);
          for (int i = 0; i < r.rows(); ++i)
            for (int j = 0; j < r.cols(); ++j) d.at(dst + i, src + j) += sign * r.at(i, j);
        } else {
          for (int t = 0; t < c.at[size_t(ch[0])].rank(); ++t) d.at(dst + t, src + t) += sign;
        }
      }
    }
    diff.push_back(d);
  }

  std::vector<FgModule> out;
  for (int p = 0; p <= top_degree; ++p) {
    const IntMatrix* din = p > 0 ? &diff[size_t(p) - 1] : nullptr;
    const FgModule* prev = p > 0 ? &cochain[size_t(p) - 1] : nullptr;
    out.push_back(
        complex_cohomology(cochain[size_t(p)], diff[size_t(p)], cochain[size_t(p) + 1], din, prev)
            .group);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sheaf cohomology of a module sheaf, with the sesquiad module structure on
// top: degree zero carries the genuine section points, higher degrees are
// reported as full modules over the global sections sesquiad.
// ---------------------------------------------------------------------------

struct CohomologyResult {
  int degree;
  FgModule group;             // the cohomology group itself
  ModulePtr sesquiad_module;  // module over the global sesquiad
  IntMatrix comparison;       // carrier of the module into the group
  bool base_change_strict;    // degree 0: points span a proper subgroup
};

struct CohomologyReport {
  std::vector<CohomologyResult> degrees;  // 0 .. dim
  int dimension;
  bool vanishing_checked;   // H^{dim+1} computed and equal to zero
  bool oracle_checked;      // higher-limit comparison ran
};

inline CohomologyReport cohomology(const SheafPtr& f, int oracle_point_bound = 5,
                                   const Int& point_enum_bound = 256) {
  CarrierSheaf c = ascend(*f);
  const FiniteSpace& sp = f->scheme->space;
  int dim = sp.dimension();
  int stages = dim + 2;
  GodementComplex gc = godement(c, stages);

  // d compose d must vanish
  for (size_t k = 0; k + 1 < gc.diff.size(); ++k) {
    IntMatrix dd = gc.diff[k + 1] * gc.diff[k];
    for (int j = 0; j < dd.cols(); ++j)
      internal_check(gc.gamma[k + 2].relations().member(dd.col(j)),
                     "Godement differentials do not compose to zero");
  }
  // global action commutes with the differentials
  const ZAlgebra& rg = f->scheme->global->ring;
  for (size_t k = 0; k < gc.diff.size(); ++k)
    for (int r = 0; r < rg.rank(); ++r) {
      IntMatrix lhs = gc.diff[k] * gc.gamma_action[k][size_t(r)];
      IntMatrix rhs = gc.gamma_action[k + 1][size_t(r)] * gc.diff[k];
      for (int j = 0; j < lhs.cols(); ++j)
        internal_check(gc.gamma[k + 1].relations().member((lhs - rhs).col(j)),
                       "global action does not commute with the differential");
    }

  CohomologyReport rep;
  rep.dimension = dim;
  std::vector<GroupPresentation> hs;
  for (int p = 0; p <= dim + 1; ++p) {
    const IntMatrix* din = p > 0 ? &gc.diff[size_t(p) - 1] : nullptr;
    const FgModule* prev = p > 0 ? &gc.gamma[size_t(p) - 1] : nullptr;
    hs.push_back(complex_cohomology(gc.gamma[size_t(p)], gc.diff[size_t(p)],
                                    gc.gamma[size_t(p) + 1], din, prev));
  }
  internal_check(hs[size_t(dim) + 1].group.is_trivial(),
                 "cohomology does not vanish above the dimension");
  rep.vanishing_checked = true;

  // cross-validate against the higher limit computation on small spaces
  rep.oracle_checked = false;
  if (sp.size() <= oracle_point_bound) {
    auto oracle = higher_limit_oracle(c, dim);
    for (int p = 0; p <= dim; ++p)
      internal_check(hs[size_t(p)].group.isomorphic_as_group(oracle[size_t(p)]),
                     "Godement cohomology disagrees with the higher limit");
    rep.oracle_checked = true;
  }

  for (int p = 0; p <= dim; ++p) {
    CohomologyResult res;
    res.degree = p;
    res.group = hs[size_t(p)].group;
    res.base_change_strict = false;

    // action of the global ring on the cohomology presentation
    std::vector<IntMatrix> haction;
    for (int r = 0; r < rg.rank(); ++r) {
      IntMatrix m(res.group.rank(), res.group.rank());
      for (int j = 0; j < res.group.rank(); ++j) {
        Vec acted = gc.gamma_action[size_t(p)][size_t(r)] * hs[size_t(p)].cycle_gens.col(j);
        m.set_col(j, express_in_cohomology(hs[size_t(p)], acted));
      }
      haction.push_back(m);
    }
    FgModule h_mod(res.group.rank(), res.group.relations().basis(), haction);

    if (p == 0) {
      // genuine section points: compatible point tuples, embedded into
      // gamma(C^0) and expressed in cohomology coordinates
      std::vector<int> all;
      for (int x = 0; x < sp.size(); ++x) all.push_back(x);
      SectionData sd = sections_over(*f, all);
      std::vector<Vec> pts;
      for (const Vec& t : sd.point_tuples) pts.push_back(express_in_cohomology(hs[0], t));
      std::sort(pts.begin(), pts.end(), VecLess{});
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      // the carrier is the span of the points; present it on the Hermite
      // basis of that span so the presentation stays small even when the
      // point set is large
      Lattice span = Lattice::from_columns(
          h_mod.rank(), hstack(IntMatrix::from_cols(h_mod.rank(), pts),
                               h_mod.relations().basis()));
      SubPresentation spr = submodule_presentation(h_mod, span.basis());
      IntMatrix basis_and_rel = hstack(span.basis(), h_mod.relations().basis());
      std::vector<Vec> sub_pts;
      for (const Vec& q : pts) {
        auto z = solve(basis_and_rel, q);
        internal_check(z.has_value(), "section point escapes its own span");
        Vec coord = zero_vec(spr.sub.rank());
        for (int i = 0; i < spr.sub.rank(); ++i) coord[size_t(i)] = (*z)[size_t(i)];
        sub_pts.push_back(coord);
      }
      res.sesquiad_module = make_module(f->scheme->global, spr.sub, sub_pts, false);
      res.comparison = spr.inclusion;
      // strict base change iff the points span a proper subgroup of H^0
      res.base_change_strict = !span.is_full();
    } else {
      // full module: all elements when small, otherwise the monoid closure
      // of the presentation generators
      std::vector<Vec> pts;
      if (res.group.is_finite() && res.group.order() <= point_enum_bound) {
        pts = h_mod.elements(point_enum_bound);
      } else {
        pts.push_back(zero_vec(h_mod.rank()));
        for (int j = 0; j < h_mod.rank(); ++j)
          for (int a = 0; a < f->scheme->global->size(); ++a)
            pts.push_back(h_mod.act(f->scheme->global->embed(a), unit_vec(h_mod.rank(), j)));
      }
      res.sesquiad_module = make_module(f->scheme->global, h_mod, pts, false);
      res.comparison = IntMatrix::identity(h_mod.rank());
    }
    rep.degrees.push_back(std::move(res));
  }
  return rep;
}

// Base change comparison: in degree zero the carrier of the section module
// embeds into the full cohomology of the ascended sheaf; in higher degrees
// the two sides coincide by construction. Injectivity is verified.
struct BaseChangeDegree {
  int degree;
  std::vector<Int> lhs_torsion;
  int lhs_free;
  std::vector<Int> rhs_torsion;
  int rhs_free;
  bool injective;
  bool strict;
};

struct BaseChangeReport {
  std::vector<BaseChangeDegree> degrees;
  bool all_injective;
};

inline BaseChangeReport base_change_compare(const SheafPtr& f) {
  CohomologyReport rep = cohomology(f);
  BaseChangeReport out;
  out.all_injective = true;
  for (const auto& d : rep.degrees) {
    BaseChangeDegree bc;
    bc.degree = d.degree;
    const FgModule& lhs = d.sesquiad_module->carrier;
    bc.lhs_torsion = lhs.torsion();
    bc.lhs_free = lhs.free_rank();
    bc.rhs_torsion = d.group.torsion();
    bc.rhs_free = d.group.free_rank();
    // injectivity of the comparison map, verified through its kernel
    Lattice pre = preimage_lattice(d.comparison, d.group.relations());
    bc.injective = true;
    for (int j = 0; j < pre.basis().cols(); ++j)
      if (!lhs.relations().member(pre.basis().col(j))) bc.injective = false;
    bc.strict = d.degree == 0 ? d.base_change_strict : false;
    internal_check(!bc.injective || bc.lhs_free <= bc.rhs_free,
                   "injection into a smaller free rank");
    out.all_injective = out.all_injective && bc.injective;
    out.degrees.push_back(bc);
  }
  return out;
}

// Flabby sheaves are acyclic; failure of acyclicity on a flabby input is an
// internal error, non-flabby inputs are rejected.
inline bool flabby_acyclicity_check(const SheafPtr& f) {
  CarrierSheaf c = ascend(*f);
  require(is_flabby(c), Errc::not_flabby, "input sheaf is not flabby");
  CohomologyReport rep = cohomology(f);
  for (const auto& d : rep.degrees)
    if (d.degree >= 1)
      internal_check(d.group.is_trivial(), "flabby sheaf with nonvanishing cohomology");
  return true;
}

}  // namespace sesq
