#pragma once

// Shared instance generators for the acceptance suite: the sesquiad corpus,
// random modules obtained by closing structural constructions, and random
// homs built from covers, projections, inclusions and raw point maps.

#include <random>

#include "sesq/cohomology.hpp"

namespace gen {

using namespace sesq;

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(unsigned long seed) : eng(seed) {}
  int below(int n) { return int(eng() % static_cast<unsigned long>(n)); }
  bool coin() { return eng() & 1; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[size_t(below(int(v.size())))];
  }
};

inline SesquiadPtr f2() {
  return make_sesquiad({"0", "1"}, 1, {{0, 0}, {0, 1}}, {AdditionFact{{Int(2)}, {1}, 0}});
}

inline SesquiadPtr pm_one_f5() {
  return make_sesquiad({"0", "1", "m"}, 1, {{0, 0, 0}, {0, 1, 2}, {0, 2, 1}},
                       {AdditionFact{{Int(1), Int(1)}, {1, 2}, 0},
                        AdditionFact{{Int(5)}, {1}, 0}});
}

inline SesquiadPtr idem() {
  return make_sesquiad({"0", "1", "e"}, 1, {{0, 0, 0}, {0, 1, 2}, {0, 2, 2}}, {});
}

inline SesquiadPtr f4() {
  std::vector<std::vector<int>> add{{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  std::vector<std::vector<int>> mul{{0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
  return ring_sesquiad({"0", "1", "w", "v"}, 1, add, mul);
}

inline SesquiadPtr dual_f2() {
  std::vector<std::vector<int>> add{{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  std::vector<std::vector<int>> mul{{0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 0, 2}, {0, 3, 2, 1}};
  return ring_sesquiad({"0", "1", "b", "u"}, 1, add, mul);
}

// the acceptance corpus
inline std::vector<SesquiadPtr> corpus() {
  return {f1(), f2(), pm_one_f5(), zmod(4), idem()};
}

// random point subset containing zero, closed under the monoid action
inline std::vector<int> random_stable_subset(const ModulePtr& m, Rng& rng) {
  std::set<int> sel{m->zero_index()};
  for (int i = 0; i < m->point_count(); ++i)
    if (rng.coin()) sel.insert(i);
  bool grew = true;
  while (grew) {
    grew = false;
    for (int i : std::vector<int>(sel.begin(), sel.end()))
      for (int a = 1; a < m->base->size(); ++a) {
        int j = m->point_index(m->act(a, m->points[size_t(i)]));
        if (sel.insert(j).second) grew = true;
      }
  }
  return {sel.begin(), sel.end()};
}

// structural module zoo: frees and the unit object, closed under a few
// random quotients, submodules, tensors and products, size-capped
inline std::vector<ModulePtr> module_zoo(const SesquiadPtr& base, Rng& rng, int rounds = 8,
                                         int max_rank = 7, int max_points = 14) {
  std::vector<ModulePtr> zoo{zero_module(base), unit_module(base), free_module(base, 1)};
  if (base->ring.rank() <= 2) zoo.push_back(free_module(base, 2));
  auto admit = [&](const ModulePtr& m) {
    if (m->carrier.rank() <= max_rank && m->point_count() <= max_points) zoo.push_back(m);
  };
  for (int r = 0; r < rounds; ++r) {
    const ModulePtr& m = rng.pick(zoo);
    switch (rng.below(4)) {
      case 0: {
        auto sub = random_stable_subset(m, rng);
        admit(quotient_module(m, sub).module);
        break;
      }
      case 1: {
        auto sub = random_stable_subset(m, rng);
        admit(submodule(m, sub).module);
        break;
      }
      case 2: {
        const ModulePtr& n = rng.pick(zoo);
        if (m->carrier.rank() * n->carrier.rank() <= max_rank &&
            m->point_count() * n->point_count() <= max_points)
          admit(tensor_module(m, n));
        break;
      }
      default: {
        const ModulePtr& n = rng.pick(zoo);
        if (m->carrier.rank() + n->carrier.rank() <= max_rank &&
            m->point_count() * n->point_count() <= max_points)
          admit(product_module(m, n).module);
        break;
      }
    }
  }
  return zoo;
}

// one random hom, built structurally or by trying random point maps
inline std::optional<Hom> random_hom(const std::vector<ModulePtr>& zoo, Rng& rng) {
  const ModulePtr& m = rng.pick(zoo);
  switch (rng.below(6)) {
    case 0:
      return identity_hom(m);
    case 1: {
      const ModulePtr& n = rng.pick(zoo);
      return zero_hom(m, n);
    }
    case 2:
      if (m->point_count() > 6) return std::nullopt;
      return cover(m);
    case 3: {
      auto sub = random_stable_subset(m, rng);
      return quotient_module(m, sub).projection;
    }
    case 4: {
      auto sub = random_stable_subset(m, rng);
      return submodule(m, sub).inclusion;
    }
    default: {
      const ModulePtr& n = rng.pick(zoo);
      std::vector<int> pmap(static_cast<size_t>(m->point_count()));
      for (int i = 0; i < m->point_count(); ++i) pmap[size_t(i)] = rng.below(n->point_count());
      pmap[size_t(m->zero_index())] = n->zero_index();
      try {
        return make_hom(m, n, pmap);
      } catch (const Error&) {
        return std::nullopt;
      }
    }
  }
}

// random hom with a prescribed source, for universal-property probes
inline std::optional<Hom> random_hom_from(const ModulePtr& src, const std::vector<ModulePtr>& zoo,
                                          Rng& rng) {
  const ModulePtr& n = rng.pick(zoo);
  std::vector<int> pmap(static_cast<size_t>(src->point_count()));
  for (int i = 0; i < src->point_count(); ++i) pmap[size_t(i)] = rng.below(n->point_count());
  pmap[size_t(src->zero_index())] = n->zero_index();
  try {
    return make_hom(src, n, pmap);
  } catch (const Error&) {
    return std::nullopt;
  }
}

inline std::optional<Hom> random_hom_into(const ModulePtr& dst, const std::vector<ModulePtr>& zoo,
                                          Rng& rng) {
  const ModulePtr& w = rng.pick(zoo);
  std::vector<int> pmap(static_cast<size_t>(w->point_count()));
  for (int i = 0; i < w->point_count(); ++i) pmap[size_t(i)] = rng.below(dst->point_count());
  pmap[size_t(w->zero_index())] = dst->zero_index();
  try {
    return make_hom(w, dst, pmap);
  } catch (const Error&) {
    return std::nullopt;
  }
}

// a short strong exact sequence 0 -> S -> T -> T/S -> 0 from a full submodule
struct ShortExact {
  ModulePtr s, t, u;
  Hom incl, proj;
};

inline ShortExact random_short_exact(const std::vector<ModulePtr>& zoo, Rng& rng) {
  const ModulePtr& t = rng.pick(zoo);
  auto closed = full_closure(t, random_stable_subset(t, rng));
  auto q = quotient_module(t, [&] {
    std::vector<int> pts;
    for (int i = 0; i < closed.module->point_count(); ++i) {
      Vec v = closed.inclusion.apply(closed.module->points[size_t(i)]);
      pts.push_back(t->point_index(v));
    }
    return pts;
  }());
  return {closed.module, t, q.module, closed.inclusion, q.projection};
}

// all labeled posets on n points, as le-matrices
inline std::vector<std::vector<std::vector<bool>>> all_posets(int n) {
  std::vector<std::vector<std::vector<bool>>> out;
  int pairs = n * (n - 1);
  std::vector<std::pair<int, int>> idx;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) idx.emplace_back(i, j);
  for (unsigned long mask = 0; mask < (1ul << pairs); ++mask) {
    std::vector<std::vector<bool>> le(static_cast<size_t>(n),
                                      std::vector<bool>(static_cast<size_t>(n), false));
    for (int i = 0; i < n; ++i) le[size_t(i)][size_t(i)] = true;
    for (int k = 0; k < pairs; ++k)
      if (mask >> k & 1) le[size_t(idx[size_t(k)].first)][size_t(idx[size_t(k)].second)] = true;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j) {
        if (i != j && le[size_t(i)][size_t(j)] && le[size_t(j)][size_t(i)]) ok = false;
        for (int k = 0; k < n && ok; ++k)
          if (le[size_t(i)][size_t(j)] && le[size_t(j)][size_t(k)] && !le[size_t(i)][size_t(k)])
            ok = false;
      }
    if (ok) out.push_back(std::move(le));
  }
  return out;
}

inline SchemePtr constant_scheme(const std::vector<std::vector<bool>>& le) {
  int n = int(le.size());
  FiniteSpace sp;
  for (int i = 0; i < n; ++i) sp.names.push_back("x" + std::to_string(i));
  sp.le = le;
  auto a = f1();
  std::map<std::pair<int, int>, SesquiadHom> res;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && le[size_t(y)][size_t(x)]) res.emplace(std::make_pair(x, y), identity_hom(a));
  return make_scheme(sp, std::vector<SesquiadPtr>(static_cast<size_t>(n), a), res);
}

// random sheaves over a constant-F1 scheme: constants, skyscrapers, products
inline SheafPtr random_sheaf(const SchemePtr& sc, const std::vector<ModulePtr>& zoo, Rng& rng,
                             int depth = 1) {
  switch (rng.below(depth > 0 ? 3 : 2)) {
    case 0:
      return constant_sheaf(sc, rng.pick(zoo));
    case 1: {
      int x = rng.below(sc->space.size());
      return skyscraper(sc, x, rng.pick(zoo));
    }
    default: {
      auto f = random_sheaf(sc, zoo, rng, depth - 1);
      auto g = random_sheaf(sc, zoo, rng, depth - 1);
      long worst = 1;
      for (int x = 0; x < sc->space.size(); ++x)
        worst = std::max(worst, long(f->at[size_t(x)]->point_count()) *
                                    g->at[size_t(x)]->point_count());
      if (worst > 14) return f;  // keep section point enumerations tame
      return sheaf_product(f, g).sheaf;
    }
  }
}

// a random sheaf hom out of constant homs, skyscraper collapses and
// projections; returns nothing when the draw does not compose
inline std::optional<SheafHom> random_sheaf_hom(const SchemePtr& sc,
                                                const std::vector<ModulePtr>& zoo, Rng& rng) {
  switch (rng.below(3)) {
    case 0: {
      // constant hom between constant sheaves
      auto h = random_hom(zoo, rng);
      if (!h) return std::nullopt;
      auto f = constant_sheaf(sc, h->src);
      auto g = constant_sheaf(sc, h->dst);
      std::vector<Hom> comps(static_cast<size_t>(sc->space.size()), *h);
      return make_sheaf_hom(f, g, comps);
    }
    case 1: {
      // projection from a product of two random sheaves
      auto f = random_sheaf(sc, zoo, rng, 0);
      auto g = random_sheaf(sc, zoo, rng, 0);
      auto pr = sheaf_product(f, g);
      return rng.coin() ? pr.proj_left : pr.proj_right;
    }
    default: {
      // constant sheaf onto a skyscraper at a point: restrict then collapse
      const ModulePtr& m = rng.pick(zoo);
      auto f = constant_sheaf(sc, m);
      int x = rng.below(sc->space.size());
      auto sky = skyscraper(sc, x, m);
      std::vector<Hom> comps;
      for (int y = 0; y < sc->space.size(); ++y) {
        if (sc->space.leq(x, y)) {
          std::vector<int> pm;
          for (int i = 0; i < m->point_count(); ++i)
            pm.push_back(sky->at[size_t(y)]->point_index(m->points[size_t(i)]));
          comps.push_back(make_hom(f->at[size_t(y)], sky->at[size_t(y)], pm));
        } else {
          comps.push_back(zero_hom(f->at[size_t(y)], sky->at[size_t(y)]));
        }
      }
      return make_sheaf_hom(f, sky, comps);
    }
  }
}

}  // namespace gen
