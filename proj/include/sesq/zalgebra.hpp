#pragma once

#include "sesq/fg_module.hpp"

namespace sesq {

// ---------------------------------------------------------------------------
// Finite-rank Z-algebra: Z^rank modulo a relation lattice, with commutative
// associative multiplication given by one matrix per basis element and a
// distinguished unit. The relation lattice is required to be an ideal.
// ---------------------------------------------------------------------------

class ZAlgebra {
  int rank_ = 0;
  std::vector<IntMatrix> mult_;  // mult_[i] = matrix of (e_i * .)
  Vec unit_;
  Lattice rel_;

 public:
  ZAlgebra() : unit_() {}

  ZAlgebra(int rank, std::vector<IntMatrix> mult, Vec unit, const IntMatrix& relations)
      : rank_(rank), mult_(std::move(mult)), unit_(std::move(unit)),
        rel_(Lattice::from_columns(rank, relations)) {}

  static ZAlgebra integers() {
    return ZAlgebra(1, {IntMatrix::identity(1)}, unit_vec(1, 0), IntMatrix(1, 0));
  }

  int rank() const { return rank_; }
  const Vec& unit() const { return unit_; }
  const Lattice& relations() const { return rel_; }
  const std::vector<IntMatrix>& basis_mult() const { return mult_; }

  Vec reduce(const Vec& v) const { return rel_.reduce(v); }
  bool is_zero_element(const Vec& v) const { return rel_.member(v); }

  IntMatrix mult_matrix(const Vec& x) const {
    require(int(x.size()) == rank_, Errc::dimension_mismatch, "algebra element size");
    IntMatrix m(rank_, rank_);
    for (int i = 0; i < rank_; ++i) {
      if (x[size_t(i)] == 0) continue;
      m = m + mult_[size_t(i)].scaled(x[size_t(i)]);
    }
    return m;
  }

  Vec mul(const Vec& x, const Vec& y) const { return reduce(mult_matrix(x) * y); }

  Vec pow(Vec x, unsigned long e) const {
    Vec r = reduce(unit_);
    while (e) {
      if (e & 1) r = mul(r, x);
      x = mul(x, x);
      e >>= 1;
    }
    return r;
  }

  // Underlying abelian group with the multiplication as the action of the
  // algebra on itself.
  FgModule underlying_module() const { return FgModule(rank_, rel_.basis(), mult_); }

  bool is_zero_ring() const { return rel_.is_full() || rank_ == 0; }

  void validate() const {
    require(int(unit_.size()) == rank_ && int(mult_.size()) == rank_, Errc::invariant_violation,
            "algebra data sizes");
    // relation lattice is an ideal
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rel_.basis().cols(); ++j)
        require(rel_.member(mult_[size_t(i)] * rel_.basis().col(j)), Errc::invariant_violation,
                "algebra relations are not an ideal");
    for (int i = 0; i < rank_; ++i) {
      Vec ei = unit_vec(rank_, i);
      Vec ue = mult_matrix(unit_) * ei;
      for (int k = 0; k < rank_; ++k) ue[size_t(k)] -= ei[size_t(k)];
      require(rel_.member(ue), Errc::invariant_violation, "unit does not act as identity");
      for (int j = i; j < rank_; ++j) {
        Vec ej = unit_vec(rank_, j);
        Vec ij = mul(ei, ej), ji = mul(ej, ei);
        require(ij == ji, Errc::invariant_violation, "multiplication not commutative");
        for (int k = 0; k < rank_; ++k) {
          Vec ek = unit_vec(rank_, k);
          require(mul(mul(ei, ej), ek) == mul(ei, mul(ej, ek)), Errc::invariant_violation,
                  "multiplication not associative");
        }
      }
    }
  }
};

// x is a unit iff 1 lies in the ideal x * R; in a commutative unital ring
// this is exactly invertibility, and multiplication by x is then a bijection
// of the underlying group.
inline bool is_unit(const ZAlgebra& r, const Vec& x) {
  if (r.rank() == 0) return true;  // zero ring
  IntMatrix m = hstack(r.mult_matrix(x), r.relations().basis());
  return solve(m, r.unit()).has_value();
}

inline std::optional<Vec> inverse(const ZAlgebra& r, const Vec& x) {
  if (r.rank() == 0) return Vec{};
  IntMatrix m = hstack(r.mult_matrix(x), r.relations().basis());
  auto sol = solve(m, r.unit());
  if (!sol) return std::nullopt;
  Vec inv = zero_vec(r.rank());
  for (int i = 0; i < r.rank(); ++i) inv[size_t(i)] = (*sol)[size_t(i)];
  return r.reduce(inv);
}

// The ideal generated by a set of elements, as a subgroup of the underlying
// group: the Z-span of basis-element multiples of the generators, together
// with the algebra relations.
inline Subgroup ideal_generated(const ZAlgebra& r, const std::vector<Vec>& gens) {
  std::vector<Vec> cols;
  for (const Vec& g : gens)
    for (int i = 0; i < r.rank(); ++i) cols.push_back(r.basis_mult()[size_t(i)] * g);
  return Subgroup(r.underlying_module(), IntMatrix::from_cols(r.rank(), cols));
}

inline ZAlgebra quotient_algebra(const ZAlgebra& r, const Subgroup& ideal) {
  require(ideal.dim() == r.rank(), Errc::dimension_mismatch, "quotient algebra: ideal dimension");
  return ZAlgebra(r.rank(), r.basis_mult(), r.unit(),
                  hstack(r.relations().basis(), ideal.lattice().basis()));
}

// Kernel of multiplication by x, as a subgroup: {y : x y = 0}.
inline Subgroup annihilator(const ZAlgebra& r, const Vec& x) {
  Lattice pre = preimage_lattice(r.mult_matrix(x), r.relations());
  return Subgroup(r.underlying_module(), pre.basis());
}

// ---------------------------------------------------------------------------
// Tensor product of two modules over a common algebra. Generators are pairs
// of generators; relations are each side's relations tensored with the other
// side's identity plus the balancing relations (r x) (x) y - x (x) (r y) for
// every algebra basis element r. The action is through the left factor.
// ---------------------------------------------------------------------------

inline FgModule tensor(const FgModule& a, const FgModule& b, const ZAlgebra& over) {
  require(int(a.action().size()) == over.rank() && int(b.action().size()) == over.rank(),
          Errc::invariant_violation, "tensor: both sides need an action of the algebra");
  int ra = a.rank(), rb = b.rank();
  IntMatrix rel = hstack(kron(a.relations().basis(), IntMatrix::identity(rb)),
                         kron(IntMatrix::identity(ra), b.relations().basis()));
  std::vector<Vec> balance;
  for (int r = 0; r < over.rank(); ++r) {
    const IntMatrix& act_a = a.action_of(r);
    const IntMatrix& act_b = b.action_of(r);
    for (int x = 0; x < ra; ++x)
      for (int y = 0; y < rb; ++y) {
        Vec v = zero_vec(ra * rb);
        for (int i = 0; i < ra; ++i)
          if (act_a.at(i, x) != 0) v[size_t(i) * size_t(rb) + size_t(y)] += act_a.at(i, x);
        for (int j = 0; j < rb; ++j)
          if (act_b.at(j, y) != 0) v[size_t(x) * size_t(rb) + size_t(j)] -= act_b.at(j, y);
        if (!is_zero(v)) balance.push_back(std::move(v));
      }
  }
  rel = hstack(rel, IntMatrix::from_cols(ra * rb, balance));
  std::vector<IntMatrix> action;
  for (int r = 0; r < over.rank(); ++r)
    action.push_back(kron(a.action_of(r), IntMatrix::identity(rb)));
  return FgModule(ra * rb, rel, std::move(action));
}

}  // namespace sesq
