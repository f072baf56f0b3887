#pragma once

#include <set>

#include "sesq/normal_form.hpp"

namespace sesq {

// ---------------------------------------------------------------------------
// Finitely generated abelian group, presented as the cokernel of an integer
// matrix, optionally with the action of a finite-rank algebra (one square
// matrix per algebra basis element). Everything is canonicalized eagerly:
// the relation lattice is kept in Hermite form and the invariant factors are
// precomputed, so equality of presentations is plain comparison.
// ---------------------------------------------------------------------------

class FgModule {
  int rank_ = 0;
  Lattice rel_;
  std::vector<IntMatrix> action_;
  std::vector<Int> torsion_;  // invariant factors > 1, divisibility order
  int free_rank_ = 0;

  void compute_invariants() {
    std::vector<Int> diag = smith_diagonal(rel_.basis());
    int nonzero = 0;
    torsion_.clear();
    for (const Int& d : diag)
      if (d != 0) {
        ++nonzero;
        if (d != 1) torsion_.push_back(d);
      }
    free_rank_ = rank_ - nonzero;
  }

 public:
  FgModule() = default;

  FgModule(int rank, const IntMatrix& relations, std::vector<IntMatrix> action = {})
      : rank_(rank), rel_(Lattice::from_columns(rank, relations)), action_(std::move(action)) {
    for (const IntMatrix& a : action_) {
      require(a.rows() == rank && a.cols() == rank, Errc::dimension_mismatch,
              "action matrix shape");
      for (int j = 0; j < rel_.basis().cols(); ++j)
        require(rel_.member(a * rel_.basis().col(j)), Errc::invariant_violation,
                "action does not preserve the relation lattice");
    }
    compute_invariants();
  }

  static FgModule free(int rank) { return FgModule(rank, IntMatrix(rank, 0)); }

  static FgModule cyclic(const Int& n) {
    IntMatrix r(1, 1);
    r.at(0, 0) = n;
    return FgModule(1, r);
  }

  int rank() const { return rank_; }
  const Lattice& relations() const { return rel_; }
  bool has_action() const { return !action_.empty(); }
  const std::vector<IntMatrix>& action() const { return action_; }
  const IntMatrix& action_of(int i) const { return action_[size_t(i)]; }

  int free_rank() const { return free_rank_; }
  const std::vector<Int>& torsion() const { return torsion_; }
  bool is_trivial() const { return free_rank_ == 0 && torsion_.empty(); }
  bool is_finite() const { return free_rank_ == 0; }
  bool is_torsion_free() const { return torsion_.empty(); }

  Int order() const {  // 0 when infinite
    if (!is_finite()) return 0;
    Int n = 1;
    for (const Int& d : torsion_) n *= d;
    return n;
  }

  Vec reduce(const Vec& v) const { return rel_.reduce(v); }
  bool is_zero_element(const Vec& v) const { return rel_.member(v); }

  // Action of an algebra element (coefficient vector over the algebra basis).
  IntMatrix action_matrix(const Vec& coeffs) const {
    require(coeffs.size() == action_.size(), Errc::dimension_mismatch, "algebra element size");
    IntMatrix m(rank_, rank_);
    for (size_t i = 0; i < action_.size(); ++i) {
      if (coeffs[i] == 0) continue;
      m = m + action_[i].scaled(coeffs[i]);
    }
    return m;
  }

  Vec act(const Vec& coeffs, const Vec& v) const { return reduce(action_matrix(coeffs) * v); }

  // Same group and same action matrices up to the relation lattice.
  bool same_presentation(const FgModule& o) const {
    if (rank_ != o.rank_ || !(rel_ == o.rel_) || action_.size() != o.action_.size()) return false;
    for (size_t i = 0; i < action_.size(); ++i)
      for (int j = 0; j < rank_; ++j)
        if (!rel_.member((action_[i] - o.action_[i]).col(j))) return false;
    return true;
  }

  bool isomorphic_as_group(const FgModule& o) const {
    return free_rank_ == o.free_rank_ && torsion_ == o.torsion_;
  }

  std::string group_str() const {
    std::string s;
    for (const Int& d : torsion_) s += (s.empty() ? "Z/" : " + Z/") + d.get_str();
    if (free_rank_ > 0)
      s += (s.empty() ? "Z^" : " + Z^") + std::to_string(free_rank_);
    return s.empty() ? "0" : s;
  }

  // All elements as canonical representatives, by closure under the
  // coordinate steps; only valid for finite groups.
  std::vector<Vec> elements(const Int& bound) const {
    Int n = order();
    require(n != 0, Errc::bound_exceeded, "element enumeration of an infinite group");
    require(n <= bound, Errc::bound_exceeded, "element enumeration above configured bound");
    std::set<Vec, VecLess> seen;
    std::vector<Vec> queue;
    Vec z = zero_vec(rank_);
    seen.insert(z);
    queue.push_back(z);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      Vec cur = queue[qi];
      for (int j = 0; j < rank_; ++j) {
        Vec nxt = cur;
        nxt[size_t(j)] += 1;
        nxt = reduce(nxt);
        if (seen.insert(nxt).second) queue.push_back(nxt);
      }
    }
    internal_check(Int(long(queue.size())) == n, "element enumeration miscounted");
    std::vector<Vec> out(seen.begin(), seen.end());
    return out;
  }
};

// Isomorphic presentation on as few generators as possible: in Smith
// coordinates the relations are diagonal, and coordinates with a unit
// invariant factor vanish. to_new and from_new translate between the two
// presentations, with from_new * to_new the identity modulo the relations.
struct CompressedPresentation {
  FgModule mod;
  IntMatrix to_new, from_new;
};

inline CompressedPresentation compress_presentation(const FgModule& m) {
  SmithResult s = smith_normal_form(m.relations().basis());
  auto diag = s.diagonal();
  std::vector<int> keep;
  for (int i = 0; i < m.rank(); ++i) {
    Int d = i < int(diag.size()) ? diag[size_t(i)] : Int(0);
    if (d != 1) keep.push_back(i);
  }
  int k = int(keep.size());
  IntMatrix to_new(k, m.rank());
  for (int j = 0; j < k; ++j)
    for (int c = 0; c < m.rank(); ++c) to_new.at(j, c) = s.u.at(keep[size_t(j)], c);
  IntMatrix uinv = invert_unimodular(s.u);
  IntMatrix from_new(m.rank(), k);
  for (int j = 0; j < k; ++j)
    for (int r2 = 0; r2 < m.rank(); ++r2) from_new.at(r2, j) = uinv.at(r2, keep[size_t(j)]);
  std::vector<Vec> rel_cols;
  for (int j = 0; j < k; ++j) {
    Int d = keep[size_t(j)] < int(diag.size()) ? diag[size_t(keep[size_t(j)])] : Int(0);
    if (d != 0) {
      Vec col = zero_vec(k);
      col[size_t(j)] = d;
      rel_cols.push_back(col);
    }
  }
  return {FgModule(k, IntMatrix::from_cols(k, rel_cols)), to_new, from_new};
}

// ---------------------------------------------------------------------------
// Subgroup of an FgModule, canonicalized to the Hermite basis of the lattice
// spanned by its generators together with the ambient relations.
// ---------------------------------------------------------------------------

class Subgroup {
  int dim_ = 0;
  IntMatrix gens_;
  Lattice span_;

 public:
  Subgroup() = default;

  Subgroup(const FgModule& ambient, const IntMatrix& gens)
      : dim_(ambient.rank()), gens_(gens),
        span_(Lattice::from_columns(ambient.rank(),
                                    hstack(gens, ambient.relations().basis()))) {
    require(gens.cols() == 0 || gens.rows() == ambient.rank(), Errc::dimension_mismatch,
            "subgroup generators of wrong dimension");
  }

  Subgroup(const FgModule& ambient, const std::vector<Vec>& gens)
      : Subgroup(ambient, IntMatrix::from_cols(ambient.rank(), gens)) {}

  int dim() const { return dim_; }
  const IntMatrix& generators() const { return gens_; }
  const Lattice& lattice() const { return span_; }

  bool member(const Vec& v) const {
    require(int(v.size()) == dim_, Errc::dimension_mismatch, "subgroup member: dimension");
    return span_.member(v);
  }

  bool operator==(const Subgroup& o) const { return dim_ == o.dim_ && span_ == o.span_; }
  bool contains(const Subgroup& o) const { return span_.contains(o.span_); }
};

// m modulo s: same covering free module, enlarged relation lattice. The
// projection is the identity on coordinates. Action matrices descend as they
// are; they must map the subgroup into itself when present.
struct QuotientModule {
  FgModule quotient;
  IntMatrix projection;
};

inline QuotientModule quotient(const FgModule& m, const Subgroup& s) {
  require(s.dim() == m.rank(), Errc::dimension_mismatch, "quotient: subgroup of wrong module");
  for (const IntMatrix& a : m.action())
    for (int j = 0; j < s.lattice().basis().cols(); ++j)
      require(s.member(a * s.lattice().basis().col(j)), Errc::invariant_violation,
              "quotient: action does not preserve the subgroup");
  FgModule q(m.rank(), hstack(m.relations().basis(), s.lattice().basis()), m.action());
  return {q, IntMatrix::identity(m.rank())};
}

// Presentation of the subgroup of `ambient` spanned by the given generator
// vectors, as an abstract module together with the inclusion matrix.
struct SubPresentation {
  FgModule sub;
  IntMatrix inclusion;  // ambient.rank x sub.rank
};

inline SubPresentation submodule_presentation(const FgModule& ambient, const IntMatrix& gens) {
  Lattice rel = preimage_lattice(gens, ambient.relations());
  std::vector<IntMatrix> action;
  IntMatrix gens_and_rel = hstack(gens, ambient.relations().basis());
  for (const IntMatrix& a : ambient.action()) {
    IntMatrix sub_a(gens.cols(), gens.cols());
    for (int j = 0; j < gens.cols(); ++j) {
      auto x = solve(gens_and_rel, a * gens.col(j));
      require(x.has_value(), Errc::invariant_violation,
              "submodule generators are not action-stable");
      for (int i = 0; i < gens.cols(); ++i) sub_a.at(i, j) = (*x)[size_t(i)];
    }
    action.push_back(sub_a);
  }
  return {FgModule(gens.cols(), rel.basis(), std::move(action)), gens};
}

}  // namespace sesq
