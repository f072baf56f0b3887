#pragma once

#include <map>
#include <memory>

#include "sesq/zalgebra.hpp"

namespace sesq {

// ---------------------------------------------------------------------------
// A sesquiad: a finite commutative monoid with absorbing zero, together with
// a list of addition facts (integer combinations of elements that land back
// in the monoid) and the universal ring they present. The ring is the
// contracted monoid algebra modulo the ideal generated by the fact vectors;
// its basis is indexed by the nonzero elements, and element i embeds as the
// reduced unit vector e_{i-1}. Element index 0 is always the zero element.
// ---------------------------------------------------------------------------

// One addition fact: sum of coeff[j] * element(arg[j]) equals element(result).
// Canonical form: args strictly increasing, nonzero, with nonzero coefficients.
struct AdditionFact {
  std::vector<Int> coeff;
  std::vector<int> arg;
  int result = 0;

  bool operator==(const AdditionFact&) const = default;
  auto operator<=>(const AdditionFact&) const = default;
};

struct SaturationBounds {
  int arity = 3;       // max number of distinct elements in an enumerated fact
  int coeff_cap = 6;   // enumerated coefficients range over [-K, K], K <= cap
  int coeff_floor = 3; // and K >= floor even when all additive orders are small
};

class Sesquiad;
using SesquiadPtr = std::shared_ptr<const Sesquiad>;

class Sesquiad {
 public:
  std::vector<std::string> names;      // names[0] is the zero element
  int one = 0;                         // index of the unit (0 only in the zero sesquiad)
  std::vector<std::vector<int>> table; // monoid multiplication
  std::vector<AdditionFact> facts;
  ZAlgebra ring;                       // universal ring on basis = nonzero elements

  int size() const { return int(names.size()); }
  bool is_zero_sesquiad() const { return size() == 1; }
  int mul(int a, int b) const { return table[size_t(a)][size_t(b)]; }

  Vec embed(int a) const {
    if (a == 0) return zero_vec(ring.rank());
    return ring.reduce(unit_vec(ring.rank(), a - 1));
  }

  int element_index(const std::string& n) const {
    for (int i = 0; i < size(); ++i)
      if (names[size_t(i)] == n) return i;
    fail(Errc::unknown_reference, "no element named " + n);
  }

  // Vector of the fact inside the contracted monoid algebra.
  Vec fact_vector(const AdditionFact& f) const {
    Vec v = zero_vec(ring.rank());
    for (size_t j = 0; j < f.arg.size(); ++j) v[size_t(f.arg[j] - 1)] += f.coeff[j];
    if (f.result != 0) v[size_t(f.result - 1)] -= 1;
    return v;
  }

  std::string fact_str(const AdditionFact& f) const {
    std::string s;
    for (size_t j = 0; j < f.arg.size(); ++j) {
      const Int& k = f.coeff[j];
      if (j) s += " + ";
      if (k != 1) s += k.get_str() + "*";
      s += names[size_t(f.arg[j])];
    }
    if (f.arg.empty()) s += "0";
    return s + " = " + names[size_t(f.result)];
  }
};

namespace detail {

inline void validate_monoid(const std::vector<std::string>& names, int one,
                            const std::vector<std::vector<int>>& table) {
  int n = int(names.size());
  require(n >= 1, Errc::not_a_monoid, "empty element list");
  require(int(table.size()) == n, Errc::not_a_monoid, "multiplication table size");
  for (auto& row : table) {
    require(int(row.size()) == n, Errc::not_a_monoid, "multiplication table row size");
    for (int x : row) require(0 <= x && x < n, Errc::not_a_monoid, "table entry out of range");
  }
  std::map<std::string, int> seen;
  for (int i = 0; i < n; ++i)
    require(seen.emplace(names[size_t(i)], i).second, Errc::not_a_monoid,
            "duplicate element name");
  if (n == 1) {
    require(one == 0 && table[0][0] == 0, Errc::not_a_monoid, "bad zero sesquiad");
    return;
  }
  require(one != 0, Errc::not_a_monoid, "unit coincides with zero in a nonzero sesquiad");
  for (int a = 0; a < n; ++a) {
    require(table[0][size_t(a)] == 0 && table[size_t(a)][0] == 0, Errc::not_a_monoid,
            "zero is not absorbing");
    require(table[size_t(one)][size_t(a)] == a, Errc::not_a_monoid, "unit is not an identity");
    for (int b = a; b < n; ++b) {
      require(table[size_t(a)][size_t(b)] == table[size_t(b)][size_t(a)], Errc::not_a_monoid,
              "multiplication not commutative");
      for (int c = 0; c < n; ++c)
        require(table[size_t(table[size_t(a)][size_t(b)])][size_t(c)] ==
                    table[size_t(a)][size_t(table[size_t(b)][size_t(c)])],
                Errc::not_a_monoid, "multiplication not associative");
    }
  }
}

inline AdditionFact canonical_fact(std::vector<Int> coeff, std::vector<int> arg, int result) {
  std::map<int, Int> terms;
  for (size_t j = 0; j < arg.size(); ++j)
    if (arg[j] != 0) terms[arg[j]] += coeff[j];
  AdditionFact f;
  for (auto& [a, k] : terms)
    if (k != 0) {
      f.coeff.push_back(k);
      f.arg.push_back(a);
    }
  f.result = result;
  return f;
}

inline bool trivial_fact(const AdditionFact& f) {
  if (f.arg.empty()) return f.result == 0;
  return f.arg.size() == 1 && f.coeff[0] == 1 && f.result == f.arg[0];
}

}  // namespace detail

// Builds the sesquiad over its universal ring. `extra_relations` adjoins
// further ideal generators (used by quotient constructions); when
// `add_basis_facts` is set, a fact is recorded for every Hermite basis vector
// of the final relation lattice, so rebuilding from the stored facts always
// reproduces the ring exactly.
inline SesquiadPtr make_sesquiad(std::vector<std::string> names, int one,
                                 std::vector<std::vector<int>> table,
                                 std::vector<AdditionFact> raw_facts,
                                 const std::vector<Vec>& extra_relations = {},
                                 bool add_basis_facts = false) {
  detail::validate_monoid(names, one, table);
  int n = int(names.size());
  int d = n - 1;

  auto s = std::make_shared<Sesquiad>();
  s->names = std::move(names);
  s->one = one;
  s->table = std::move(table);

  // contracted monoid algebra on the nonzero elements
  std::vector<IntMatrix> mult;
  for (int a = 1; a < n; ++a) {
    IntMatrix m(d, d);
    for (int b = 1; b < n; ++b) {
      int ab = s->table[size_t(a)][size_t(b)];
      if (ab != 0) m.at(ab - 1, b - 1) = 1;
    }
    mult.push_back(m);
  }
  ZAlgebra free_alg(d, mult, d > 0 ? unit_vec(d, one - 1) : Vec{}, IntMatrix(d, 0));

  std::vector<AdditionFact> facts;
  for (auto& rf : raw_facts) {
    require(rf.coeff.size() == rf.arg.size(), Errc::invariant_violation, "fact shape");
    for (int a : rf.arg)
      require(0 <= a && a < n, Errc::unknown_reference, "fact argument out of range");
    require(0 <= rf.result && rf.result < n, Errc::unknown_reference, "fact result out of range");
    AdditionFact f = detail::canonical_fact(rf.coeff, rf.arg, rf.result);
    if (!detail::trivial_fact(f)) facts.push_back(f);
  }

  std::vector<Vec> gens;
  {
    Sesquiad tmp = *s;  // fact_vector needs the ring rank only
    tmp.ring = free_alg;
    for (const auto& f : facts) gens.push_back(tmp.fact_vector(f));
    for (const Vec& v : extra_relations) gens.push_back(v);
  }
  Subgroup ideal = ideal_generated(free_alg, gens);
  s->ring = quotient_algebra(free_alg, ideal);

  // the embedding of the elements must stay injective
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Vec diff = zero_vec(d);
      if (a != 0) diff[size_t(a - 1)] += 1;
      diff[size_t(b - 1)] -= 1;
      require(!s->ring.is_zero_element(diff), Errc::not_embeddable,
              "elements " + s->names[size_t(a)] + " and " + s->names[size_t(b)] +
                  " collapse in the universal ring");
    }

  if (add_basis_facts) {
    const IntMatrix& basis = s->ring.relations().basis();
    std::set<AdditionFact> have(facts.begin(), facts.end());
    for (int j = 0; j < basis.cols(); ++j) {
      std::vector<Int> coeff;
      std::vector<int> arg;
      for (int i = 0; i < d; ++i)
        if (basis.at(i, j) != 0) {
          coeff.push_back(basis.at(i, j));
          arg.push_back(i + 1);
        }
      coeff.push_back(Int(1));
      arg.push_back(one);
      AdditionFact f = detail::canonical_fact(coeff, arg, one);
      if (!detail::trivial_fact(f) && have.insert(f).second) facts.push_back(f);
    }
  }

  std::sort(facts.begin(), facts.end());
  facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
  s->facts = std::move(facts);

  // stored facts hold in the ring by construction; keep the check cheap and on
  for (const auto& f : s->facts)
    internal_check(s->ring.is_zero_element(s->fact_vector(f)), "stored fact fails in the ring");
  return s;
}

inline SesquiadPtr zero_sesquiad() {
  return make_sesquiad({"0"}, 0, {{0}}, {});
}

// F1 = {0, 1} with trivial addition; universal ring Z.
inline SesquiadPtr f1() {
  return make_sesquiad({"0", "1"}, 1, {{0, 0}, {0, 1}}, {});
}

// Additive order of v in the group Z^dim / lattice; nullopt when infinite.
inline std::optional<Int> element_order(const Lattice& l, const Vec& v) {
  SmithResult s = smith_normal_form(l.basis());
  Vec uv = s.u * v;
  auto diag = s.diagonal();
  Int ord = 1;
  for (int i = 0; i < int(uv.size()); ++i) {
    Int c = uv[size_t(i)];
    Int d = i < int(diag.size()) ? diag[size_t(i)] : Int(0);
    if (d == 0) {
      if (c != 0) return std::nullopt;
      continue;
    }
    Int g = gcd(d, c);
    ord = lcm(ord, exact_div(d, g));
  }
  return ord;
}

// Recomputes the addition facts that hold in the universal ring, up to the
// configured arity and coefficient bounds, always including one fact per
// Hermite basis vector of the relation lattice so the rebuilt ring is exact.
// Iterates until the fact list is stable.
inline SesquiadPtr saturate(const SesquiadPtr& a, const SaturationBounds& b = {}) {
  if (a->is_zero_sesquiad()) return a;
  int n = a->size(), d = n - 1;

  Int k_bound = b.coeff_floor;
  for (int i = 1; i < n; ++i) {
    auto ord = element_order(a->ring.relations(), a->embed(i));
    if (ord && *ord > k_bound) k_bound = *ord;
  }
  if (k_bound > b.coeff_cap) k_bound = b.coeff_cap;
  long k = k_bound.get_si();

  auto enumerate = [&](const Sesquiad& s) {
    std::vector<AdditionFact> found;
    std::vector<Vec> embeds;
    for (int i = 0; i < n; ++i) embeds.push_back(s.embed(i));
    int arity = std::min(b.arity, d);
    std::vector<int> subset;
    // iterate over nonempty subsets of nonzero elements, sizes 1..arity
    auto scan_coeffs = [&](auto&& self, size_t pos, Vec& partial,
                           std::vector<Int>& coeffs) -> void {
      if (pos == subset.size()) {
        Vec val = s.ring.reduce(partial);
        for (int r = 0; r < n; ++r)
          if (val == embeds[size_t(r)]) {
            AdditionFact f = detail::canonical_fact(coeffs, subset, r);
            if (!detail::trivial_fact(f)) found.push_back(f);
            break;  // embeds are distinct
          }
        return;
      }
      const Vec& e = embeds[size_t(subset[pos])];
      for (long c = -k; c <= k; ++c) {
        if (c == 0) continue;
        Vec next = partial;
        for (int i = 0; i < d; ++i) next[size_t(i)] += Int(c) * e[size_t(i)];
        coeffs[pos] = c;
        self(self, pos + 1, next, coeffs);
      }
    };
    auto scan_subsets = [&](auto&& self, int first, int depth) -> void {
      if (!subset.empty()) {
        Vec partial = zero_vec(d);
        std::vector<Int> coeffs(subset.size());
        scan_coeffs(scan_coeffs, 0, partial, coeffs);
      }
      if (depth == arity) return;
      for (int e = first; e < n; ++e) {
        subset.push_back(e);
        self(self, e + 1, depth + 1);
        subset.pop_back();
      }
    };
    scan_subsets(scan_subsets, 1, 0);
    return found;
  };

  SesquiadPtr cur = a;
  for (int round = 0; round < 8; ++round) {
    std::vector<AdditionFact> facts = enumerate(*cur);
    SesquiadPtr next = make_sesquiad(cur->names, cur->one, cur->table, facts,
                                     cur->ring.relations().basis().columns(), true);
    internal_check(next->ring.relations() == cur->ring.relations(),
                   "saturation changed the universal ring");
    if (next->facts == cur->facts) return next;
    cur = next;
  }
  throw InternalInconsistency("saturation did not stabilize");
}

// ---------------------------------------------------------------------------
// Homomorphisms: an element map that extends Z-linearly to the universal
// rings. The extension exists iff it kills the source relation lattice.
// ---------------------------------------------------------------------------

struct SesquiadHom {
  SesquiadPtr src, dst;
  std::vector<int> map;  // element indices
  IntMatrix ring_map;    // dst rank x src rank

  int operator()(int a) const { return map[size_t(a)]; }

  Vec apply_ring(const Vec& v) const { return dst->ring.reduce(ring_map * v); }

  bool injective_on_elements() const {
    std::set<int> im(map.begin(), map.end());
    return im.size() == map.size();
  }
};

inline SesquiadHom make_sesquiad_hom(const SesquiadPtr& src, const SesquiadPtr& dst,
                                     const std::vector<int>& map) {
  require(int(map.size()) == src->size(), Errc::dimension_mismatch, "element map size");
  for (int v : map)
    require(0 <= v && v < dst->size(), Errc::unknown_reference, "element map out of range");
  require(map[0] == 0, Errc::not_multiplicative, "map does not fix zero");
  require(map[size_t(src->one)] == dst->one, Errc::not_multiplicative, "map does not fix one");
  for (int x = 0; x < src->size(); ++x)
    for (int y = x; y < src->size(); ++y)
      require(map[size_t(src->mul(x, y))] == dst->mul(map[size_t(x)], map[size_t(y)]),
              Errc::not_multiplicative, "map is not multiplicative");

  IntMatrix rm(dst->ring.rank(), src->ring.rank());
  for (int x = 1; x < src->size(); ++x) rm.set_col(x - 1, dst->embed(map[size_t(x)]));
  const IntMatrix& rel = src->ring.relations().basis();
  for (int j = 0; j < rel.cols(); ++j)
    require(dst->ring.is_zero_element(rm * rel.col(j)), Errc::no_ring_extension,
            "an addition fact of the source fails in the target");
  return SesquiadHom{src, dst, map, rm};
}

inline SesquiadHom identity_hom(const SesquiadPtr& a) {
  std::vector<int> id(static_cast<size_t>(a->size()));
  for (int i = 0; i < a->size(); ++i) id[size_t(i)] = i;
  return SesquiadHom{a, a, id, IntMatrix::identity(a->ring.rank())};
}

inline SesquiadHom compose(const SesquiadHom& g, const SesquiadHom& f) {
  require(g.src.get() == f.dst.get(), Errc::not_composable, "sesquiad hom composition");
  std::vector<int> m(f.map.size());
  for (size_t i = 0; i < f.map.size(); ++i) m[i] = g.map[size_t(f.map[i])];
  return SesquiadHom{f.src, g.dst, m, g.ring_map * f.ring_map};
}

// ---------------------------------------------------------------------------
// Ring sesquiads: a finite commutative ring presented by its full addition
// and multiplication tables embeds as the pair (R, R). The pairwise addition
// facts present the ring exactly.
// ---------------------------------------------------------------------------

inline SesquiadPtr ring_sesquiad(const std::vector<std::string>& names, int one,
                                 const std::vector<std::vector<int>>& add,
                                 const std::vector<std::vector<int>>& mul) {
  int n = int(names.size());
  std::vector<AdditionFact> facts;
  for (int a = 1; a < n; ++a)
    for (int b = a; b < n; ++b)
      facts.push_back(detail::canonical_fact({Int(1), Int(1)}, {a, b}, add[size_t(a)][size_t(b)]));
  return make_sesquiad(names, one, mul, facts);
}

inline SesquiadPtr zmod(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  std::vector<std::vector<int>> add(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
  std::vector<std::vector<int>> mul(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      add[size_t(a)][size_t(b)] = (a + b) % n;
      mul[size_t(a)][size_t(b)] = (a * b) % n;
    }
  return ring_sesquiad(names, 1, add, mul);
}

// ---------------------------------------------------------------------------
// Morphism finiteness. Over finite-rank Z-algebras the target ring is always
// a finitely generated module over the source, so the classification reports
// witnesses rather than making a decision.
// ---------------------------------------------------------------------------

struct MorphismClass {
  bool finite = true;
  bool finite_type = true;
  bool finitely_presented = true;
  std::vector<int> witness;        // ring basis indices generating dst over src
  IntMatrix presentation_kernel;   // relations among the witness generators
};

inline MorphismClass morphism_class(const SesquiadHom& h) {
  const ZAlgebra& rb = h.dst->ring;
  MorphismClass out;
  if (rb.rank() == 0) return out;

  auto module_span = [&](const std::vector<int>& gens) {
    std::vector<Vec> cols;
    for (int g : gens)
      for (int i = 0; i < h.src->ring.rank(); ++i)
        cols.push_back(rb.mult_matrix(h.apply_ring(unit_vec(h.src->ring.rank(), i))) *
                       unit_vec(rb.rank(), g));
    return Subgroup(rb.underlying_module(), IntMatrix::from_cols(rb.rank(), cols));
  };

  std::vector<int> gens;
  Subgroup span = module_span(gens);
  for (int j = 0; j < rb.rank(); ++j) {
    if (span.member(unit_vec(rb.rank(), j))) continue;
    gens.push_back(j);
    span = module_span(gens);
  }
  out.witness = gens;

  // kernel of the presentation (R_src)^gens -> R_dst
  std::vector<Vec> cols;
  for (int g : gens)
    for (int i = 0; i < h.src->ring.rank(); ++i)
      cols.push_back(rb.mult_matrix(h.apply_ring(unit_vec(h.src->ring.rank(), i))) *
                     unit_vec(rb.rank(), g));
  IntMatrix m = IntMatrix::from_cols(rb.rank(), cols);
  out.presentation_kernel = preimage_lattice(m, rb.relations()).basis();
  return out;
}

// A is a full subsesquiad of B along `inc` when every element of B whose
// image lies in the subring generated by the image of A is itself in the
// image of A.
inline bool is_full_subsesquiad(const SesquiadHom& inc) {
  require(inc.injective_on_elements(), Errc::not_injective,
          "full subsesquiad test needs an injective inclusion");
  const ZAlgebra& rb = inc.dst->ring;
  std::vector<Vec> cols;
  for (int a = 1; a < inc.src->size(); ++a) cols.push_back(inc.dst->embed(inc.map[size_t(a)]));
  Subgroup subring(rb.underlying_module(), IntMatrix::from_cols(rb.rank(), cols));
  std::set<int> image(inc.map.begin(), inc.map.end());
  for (int b = 0; b < inc.dst->size(); ++b)
    if (subring.member(inc.dst->embed(b)) && !image.count(b)) return false;
  return true;
}

}  // namespace sesq
