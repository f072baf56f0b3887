#pragma once

#include "sesq/sesquiad.hpp"

namespace sesq {

// ---------------------------------------------------------------------------
// Congruences: multiplication-compatible partitions of a sesquiad together
// with the ideal generated by the differences of related elements. Every
// Congruence held by this type is saturated: two elements are related exactly
// when the difference of their embeddings lies in the ideal.
// ---------------------------------------------------------------------------

class Congruence {
 public:
  SesquiadPtr base;
  std::vector<int> cls;  // class index per element, numbered by first occurrence
  Subgroup ideal;        // I(C) inside the universal ring
  int num_classes = 0;

  bool same(int a, int b) const { return cls[size_t(a)] == cls[size_t(b)]; }
  bool is_diagonal() const { return num_classes == base->size(); }
  bool zero_one_separated() const { return !same(0, base->one); }

  // refinement order: this <= other iff every class of this lies in a class
  // of other
  bool refines(const Congruence& o) const {
    for (int a = 0; a < base->size(); ++a)
      for (int b = a + 1; b < base->size(); ++b)
        if (same(a, b) && !o.same(a, b)) return false;
    return true;
  }

  bool operator==(const Congruence& o) const { return cls == o.cls; }

  std::string classes_str() const {
    std::string s;
    for (int c = 0; c < num_classes; ++c) {
      s += c ? " | " : "";
      bool first = true;
      for (int a = 0; a < base->size(); ++a)
        if (cls[size_t(a)] == c) {
          s += (first ? "" : " ") + base->names[size_t(a)];
          first = false;
        }
    }
    return "{" + s + "}";
  }
};

namespace detail {

inline std::vector<int> renumber_partition(std::vector<int> cls) {
  std::map<int, int> seen;
  for (int& c : cls) {
    auto [it, fresh] = seen.emplace(c, int(seen.size()));
    c = it->second;
  }
  return cls;
}

// classes = fibers of the map to ring / ideal
inline std::vector<int> ideal_fibers(const Sesquiad& a, const Subgroup& ideal) {
  int n = a.size();
  std::vector<int> cls(static_cast<size_t>(n), -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (cls[size_t(i)] >= 0) continue;
    cls[size_t(i)] = next;
    Vec ei = a.embed(i);
    for (int j = i + 1; j < n; ++j) {
      if (cls[size_t(j)] >= 0) continue;
      Vec diff = ei;
      Vec ej = a.embed(j);
      for (size_t t = 0; t < diff.size(); ++t) diff[t] -= ej[t];
      if (ideal.member(diff)) cls[size_t(j)] = next;
    }
    ++next;
  }
  return cls;
}

inline Subgroup ideal_of_partition(const Sesquiad& a, const std::vector<int>& cls) {
  std::vector<Vec> gens;
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j)
      if (cls[size_t(i)] == cls[size_t(j)]) {
        Vec diff = a.embed(i);
        Vec ej = a.embed(j);
        for (size_t t = 0; t < diff.size(); ++t) diff[t] -= ej[t];
        gens.push_back(diff);
      }
  return ideal_generated(a.ring, gens);
}

}  // namespace detail

// Smallest saturated congruence whose classes refine into the given one:
// alternate between generating the ideal from the partition and coarsening
// the partition to the fibers of the ideal.
inline Congruence saturate_partition(const SesquiadPtr& a, std::vector<int> cls) {
  cls = detail::renumber_partition(std::move(cls));
  for (;;) {
    Subgroup ideal = detail::ideal_of_partition(*a, cls);
    std::vector<int> fib = detail::ideal_fibers(*a, ideal);
    if (fib == cls) {
      Congruence c;
      c.base = a;
      c.cls = cls;
      c.ideal = ideal;
      c.num_classes = 1 + *std::max_element(cls.begin(), cls.end());
      return c;
    }
    cls = std::move(fib);
  }
}

inline Congruence congruence_generated(const SesquiadPtr& a,
                                       const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Vec> gens;
  for (auto [x, y] : pairs) {
    require(0 <= x && x < a->size() && 0 <= y && y < a->size(), Errc::unknown_reference,
            "congruence pair out of range");
    Vec diff = a->embed(x);
    Vec ey = a->embed(y);
    for (size_t t = 0; t < diff.size(); ++t) diff[t] -= ey[t];
    gens.push_back(diff);
  }
  Subgroup ideal = ideal_generated(a->ring, gens);
  std::vector<int> cls = detail::ideal_fibers(*a, ideal);
  Congruence c;
  c.base = a;
  c.cls = cls;
  c.ideal = detail::ideal_of_partition(*a, cls);
  c.num_classes = 1 + *std::max_element(cls.begin(), cls.end());
  internal_check(c.ideal == ideal, "generated congruence ideal mismatch");
  internal_check(detail::ideal_fibers(*a, c.ideal) == cls, "generated congruence not saturated");
  return c;
}

inline Congruence diagonal_congruence(const SesquiadPtr& a) { return congruence_generated(a, {}); }

// Pairs that generate the congruence back: greedily add an unexplained
// related pair until the generated congruence matches.
inline std::vector<std::pair<int, int>> finitely_generated_witness(const Congruence& c) {
  std::vector<std::pair<int, int>> pairs;
  for (;;) {
    Congruence g = congruence_generated(c.base, pairs);
    if (g.cls == c.cls) {
      internal_check(g.ideal == c.ideal, "witness regenerates classes but not the ideal");
      return pairs;
    }
    bool added = false;
    for (int i = 0; i < c.base->size() && !added; ++i)
      for (int j = i + 1; j < c.base->size() && !added; ++j)
        if (c.same(i, j) && !g.same(i, j)) {
          pairs.emplace_back(i, j);
          added = true;
        }
    internal_check(added, "witness search stalled");
  }
}

// All saturated congruences, canonically ordered by their class vectors.
inline std::vector<Congruence> all_congruences(const SesquiadPtr& a, int bound = 8) {
  require(a->size() <= bound, Errc::bound_exceeded, "congruence enumeration above size bound");
  int n = a->size();
  std::vector<Congruence> out;
  std::set<std::vector<int>> seen;

  std::vector<int> rgs(static_cast<size_t>(n));
  auto mult_compatible = [&](const std::vector<int>& cls) {
    for (int a1 = 0; a1 < n; ++a1)
      for (int a2 = a1 + 1; a2 < n; ++a2) {
        if (cls[size_t(a1)] != cls[size_t(a2)]) continue;
        for (int b = 0; b < n; ++b)
          if (cls[size_t(a->mul(a1, b))] != cls[size_t(a->mul(a2, b))]) return false;
      }
    return true;
  };
  // restricted growth strings enumerate set partitions canonically
  auto rec = [&](auto&& self, int pos, int maxc) -> void {
    if (pos == n) {
      if (!mult_compatible(rgs)) return;
      Congruence c = saturate_partition(a, rgs);
      if (seen.insert(c.cls).second) out.push_back(std::move(c));
      return;
    }
    for (int c = 0; c <= maxc + 1 && c < n; ++c) {
      rgs[size_t(pos)] = c;
      self(self, pos + 1, std::max(maxc, c));
    }
  };
  if (n > 0) {
    rgs[0] = 0;
    rec(rec, 1, 0);
  }
  std::sort(out.begin(), out.end(),
            [](const Congruence& x, const Congruence& y) { return x.cls < y.cls; });
  return out;
}

// Primality, imported definition: the zero class is proper and the quotient
// monoid has no zero divisors.
inline bool is_prime(const Congruence& c) {
  const Sesquiad& a = *c.base;
  int zc = c.cls[0];
  bool proper = false;
  for (int i = 0; i < a.size(); ++i)
    if (c.cls[size_t(i)] != zc) proper = true;
  if (!proper) return false;
  for (int x = 0; x < a.size(); ++x)
    for (int y = x; y < a.size(); ++y)
      if (c.cls[size_t(x)] != zc && c.cls[size_t(y)] != zc && c.cls[size_t(a.mul(x, y))] == zc)
        return false;
  return true;
}

struct SpecResult {
  std::vector<Congruence> points;       // canonically ordered
  std::vector<std::vector<bool>> le;    // le[i][j] : points[i] <= points[j]
  int dimension() const {
    // longest strict chain length, counted in steps
    int n = int(points.size());
    std::vector<int> depth(static_cast<size_t>(n), 0);
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j && le[size_t(i)][size_t(j)] && depth[size_t(j)] < depth[size_t(i)] + 1) {
            depth[size_t(j)] = depth[size_t(i)] + 1;
            changed = true;
          }
    }
    int d = 0;
    for (int x : depth) d = std::max(d, x);
    return d;
  }
};

inline SpecResult spec_c(const SesquiadPtr& a, int bound = 8) {
  SpecResult r;
  if (a->is_zero_sesquiad()) return r;
  for (Congruence& c : all_congruences(a, bound))
    if (is_prime(c)) r.points.push_back(std::move(c));
  int n = int(r.points.size());
  r.le.assign(size_t(n), std::vector<bool>(size_t(n), false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.le[size_t(i)][size_t(j)] = r.points[size_t(i)].refines(r.points[size_t(j)]);
  return r;
}

// Simplicity, brute force over the saturated congruence lattice; the unit
// criterion (all differences of distinct elements invertible) must agree.
inline bool is_simple_via_units(const SesquiadPtr& a) {
  if (a->is_zero_sesquiad()) return false;
  for (int i = 0; i < a->size(); ++i)
    for (int j = i + 1; j < a->size(); ++j) {
      Vec diff = a->embed(i);
      Vec ej = a->embed(j);
      for (size_t t = 0; t < diff.size(); ++t) diff[t] -= ej[t];
      if (!is_unit(a->ring, diff)) return false;
    }
  return true;
}

inline bool is_simple(const SesquiadPtr& a, int bound = 8) {
  if (a->is_zero_sesquiad()) return false;
  bool brute = true;
  for (const Congruence& c : all_congruences(a, bound))
    if (c.zero_one_separated() && !c.is_diagonal()) brute = false;
  internal_check(brute == is_simple_via_units(a), "unit criterion disagrees with brute force");
  return brute;
}

// ---------------------------------------------------------------------------
// Quotients. The quotient ring is the universal ring modulo the ideal,
// re-presented on the nonzero classes; the stored facts of the quotient are
// the pushed-forward facts plus basis facts, so its own presentation is exact.
// ---------------------------------------------------------------------------

struct QuotientSesquiad {
  SesquiadPtr result;
  SesquiadHom projection;
};

// `fibers` must be the fibers of the ideal and the ideal must be
// multiplicatively stable; both hold for saturated congruences and for
// annihilator ideals.
inline QuotientSesquiad quotient_by_ideal(const SesquiadPtr& a, const std::vector<int>& fibers,
                                          const Lattice& ideal_lattice) {
  int n = a->size();
  std::vector<int> cls = detail::renumber_partition(fibers);
  int m = 1 + *std::max_element(cls.begin(), cls.end());
  internal_check(cls[0] == 0, "zero class must come first");

  std::vector<std::string> names(static_cast<size_t>(m));
  std::vector<int> rep(static_cast<size_t>(m), -1);
  for (int i = 0; i < n; ++i)
    if (rep[size_t(cls[size_t(i)])] < 0) {
      rep[size_t(cls[size_t(i)])] = i;
      names[size_t(cls[size_t(i)])] = a->names[size_t(i)];
    }

  std::vector<std::vector<int>> table(static_cast<size_t>(m), std::vector<int>(static_cast<size_t>(m)));
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) table[size_t(x)][size_t(y)] = cls[size_t(a->mul(rep[size_t(x)], rep[size_t(y)]))];
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      internal_check(cls[size_t(a->mul(x, y))] ==
                         table[size_t(cls[size_t(x)])][size_t(cls[size_t(y)])],
                     "partition is not multiplication compatible");

  // collapse map on ring coordinates: basis a -> basis [a], zero class drops
  auto sigma = [&](const Vec& v) {
    Vec w = zero_vec(m - 1);
    for (int i = 1; i < n; ++i) {
      if (v[size_t(i - 1)] == 0) continue;
      int c = cls[size_t(i)];
      if (c != 0) w[size_t(c - 1)] += v[size_t(i - 1)];
    }
    return w;
  };
  std::vector<Vec> extra;
  for (int j = 0; j < ideal_lattice.basis().cols(); ++j)
    extra.push_back(sigma(ideal_lattice.basis().col(j)));

  std::vector<AdditionFact> pushed;
  for (const AdditionFact& f : a->facts) {
    std::vector<int> args;
    for (int arg : f.arg) args.push_back(cls[size_t(arg)]);
    pushed.push_back(detail::canonical_fact(f.coeff, args, cls[size_t(f.result)]));
  }

  int one_cls = cls[size_t(a->one)];
  SesquiadPtr q = m == 1 ? zero_sesquiad()
                         : make_sesquiad(names, one_cls, table, pushed, extra, true);
  return {q, make_sesquiad_hom(a, q, cls)};
}

inline QuotientSesquiad quotient(const SesquiadPtr& a, const Congruence& c) {
  return quotient_by_ideal(a, c.cls, c.ideal.lattice());
}

// Maximality: maximal among congruences separating 0 from 1; equivalently
// the quotient is simple. Both routes are computed and must agree.
inline bool is_maximal(const Congruence& c, int bound = 8) {
  if (!c.zero_one_separated()) return false;
  bool lattice_maximal = true;
  for (const Congruence& d : all_congruences(c.base, bound))
    if (d.zero_one_separated() && c.refines(d) && !(d == c)) lattice_maximal = false;
  bool quotient_simple = is_simple(quotient(c.base, c).result, bound);
  internal_check(lattice_maximal == quotient_simple,
                 "lattice maximality disagrees with quotient simplicity");
  return lattice_maximal;
}

// ---------------------------------------------------------------------------
// Localization at a prime congruence. S is the set of elements outside the
// zero class; since the quotient is integral, S is multiplicatively closed,
// and the kernel of the localization map is the annihilator of the product
// of S. Powers of monoid elements are eventually periodic, so every element
// of S becomes invertible in the quotient by that annihilator, realized by a
// monoid power. The localized sesquiad is therefore again a quotient of A.
// ---------------------------------------------------------------------------

struct Localization {
  SesquiadPtr local;            // A_E
  SesquiadHom to_local;         // A -> A_E
  Congruence e_local;           // the congruence E carried to A_E
  SesquiadPtr residue;          // kappa(E) = A_E / E
  SesquiadHom local_to_residue; // A_E -> kappa(E)
};

inline Localization localize(const SesquiadPtr& a, const Congruence& e) {
  require(e.base.get() == a.get(), Errc::base_mismatch, "congruence lives on another sesquiad");
  require(is_prime(e), Errc::not_prime, "localization requires a prime congruence");

  Vec pi = a->ring.reduce(a->ring.unit());
  for (int i = 0; i < a->size(); ++i)
    if (e.cls[size_t(i)] != e.cls[0]) pi = a->ring.mul(pi, a->embed(i));
  Subgroup ann = annihilator(a->ring, pi);
  std::vector<int> fibers = detail::ideal_fibers(*a, ann);
  Localization out;
  auto q = quotient_by_ideal(a, fibers, ann.lattice());
  out.local = q.result;
  out.to_local = q.projection;

  // E pushed to A_E: ideal generated by images of I(E), classes = its fibers
  std::vector<Vec> pushed;
  for (int j = 0; j < e.ideal.lattice().basis().cols(); ++j)
    pushed.push_back(out.to_local.apply_ring(e.ideal.lattice().basis().col(j)));
  Subgroup j_ideal = ideal_generated(out.local->ring, pushed);
  Congruence el;
  el.base = out.local;
  el.cls = detail::ideal_fibers(*out.local, j_ideal);
  el.num_classes = 1 + *std::max_element(el.cls.begin(), el.cls.end());
  el.ideal = j_ideal;
  internal_check(detail::ideal_of_partition(*out.local, el.cls) == j_ideal,
                 "pushed congruence ideal is not regenerated by its pairs");
  out.e_local = el;

  auto r = quotient(out.local, el);
  out.residue = r.result;
  out.local_to_residue = r.projection;
  return out;
}

// Residue comparison: kappa(E) computed through A_E must agree with the
// total localization of A/E. Verifies the element bijection, the
// multiplication tables and the ring maps in both directions.
inline bool residue_isomorphism_verified(const SesquiadPtr& a, const Congruence& e) {
  Localization loc = localize(a, e);
  SesquiadHom a_to_kappa = compose(loc.local_to_residue, loc.to_local);

  auto q = quotient(a, e);
  Congruence delta = diagonal_congruence(q.result);
  if (!is_prime(delta)) return false;  // quotient by a prime is integral
  Localization total = localize(q.result, delta);
  SesquiadHom a_to_rhs = compose(total.to_local, q.projection);

  const SesquiadPtr& lhs = loc.residue;
  const SesquiadPtr& rhs = total.local;
  if (lhs->size() != rhs->size()) return false;

  // the correspondence is image of x <-> image of x
  std::vector<int> fwd(static_cast<size_t>(lhs->size()), -1), bwd(size_t(rhs->size()), -1);
  for (int x = 0; x < a->size(); ++x) {
    int l = a_to_kappa.map[size_t(x)], r = a_to_rhs.map[size_t(x)];
    if (fwd[size_t(l)] >= 0 && fwd[size_t(l)] != r) return false;
    if (bwd[size_t(r)] >= 0 && bwd[size_t(r)] != l) return false;
    fwd[size_t(l)] = r;
    bwd[size_t(r)] = l;
  }
  for (int l = 0; l < lhs->size(); ++l)
    if (fwd[size_t(l)] < 0) return false;

  // multiplicative bijection with mutually inverse ring maps
  SesquiadHom f = make_sesquiad_hom(lhs, rhs, fwd);
  SesquiadHom g = make_sesquiad_hom(rhs, lhs, bwd);
  SesquiadHom gf = compose(g, f), fg = compose(f, g);
  for (int i = 0; i < lhs->size(); ++i)
    if (gf.map[size_t(i)] != i) return false;
  for (int i = 0; i < rhs->size(); ++i)
    if (fg.map[size_t(i)] != i) return false;
  for (int j = 0; j < lhs->ring.rank(); ++j) {
    Vec v = unit_vec(lhs->ring.rank(), j);
    if (lhs->ring.reduce(gf.ring_map * v) != lhs->ring.reduce(v)) return false;
  }
  for (int j = 0; j < rhs->ring.rank(); ++j) {
    Vec v = unit_vec(rhs->ring.rank(), j);
    if (rhs->ring.reduce(fg.ring_map * v) != rhs->ring.reduce(v)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Unit inclusions for simple sesquiads: A^x inside A minus zero inside the
// units of the universal ring.
// ---------------------------------------------------------------------------

struct UnitReport {
  std::vector<int> monoid_units;
  bool second_inclusion_holds = true;   // A \ {0} inside R^x
  bool first_strict = false;            // A^x proper in A \ {0}
  enum class Strictness { strict, equality, unknown } second = Strictness::unknown;
  Vec second_witness;                   // a unit of R outside the embedded monoid
};

inline UnitReport unit_inclusions(const SesquiadPtr& a, int bound = 8,
                                  const Int& enumeration_bound = 4096) {
  require(is_simple(a, bound), Errc::not_simple, "unit inclusions need a simple sesquiad");
  UnitReport rep;
  for (int x = 1; x < a->size(); ++x)
    for (int y = 1; y < a->size(); ++y)
      if (a->mul(x, y) == a->one) {
        rep.monoid_units.push_back(x);
        break;
      }
  rep.first_strict = int(rep.monoid_units.size()) < a->size() - 1;
  for (int x = 1; x < a->size(); ++x)
    if (!is_unit(a->ring, a->embed(x))) rep.second_inclusion_holds = false;

  std::set<Vec, VecLess> embedded;
  for (int x = 1; x < a->size(); ++x) embedded.insert(a->embed(x));
  FgModule ring_group = a->ring.underlying_module();
  if (ring_group.is_finite() && ring_group.order() <= enumeration_bound) {
    rep.second = UnitReport::Strictness::equality;
    for (const Vec& v : ring_group.elements(enumeration_bound))
      if (is_unit(a->ring, v) && !embedded.count(a->ring.reduce(v))) {
        rep.second = UnitReport::Strictness::strict;
        rep.second_witness = v;
        break;
      }
  } else {
    for (int x = 1; x < a->size(); ++x) {
      Vec neg = a->embed(x);
      for (Int& t : neg) t = -t;
      neg = a->ring.reduce(neg);
      if (!embedded.count(neg)) {
        rep.second = UnitReport::Strictness::strict;
        rep.second_witness = neg;
        break;
      }
    }
  }
  return rep;
}

}  // namespace sesq
