#pragma once

#include <optional>

#include "sesq/int_matrix.hpp"

namespace sesq {

// ---------------------------------------------------------------------------
// Smith normal form.
//
// Pivoting rule: among the entries of the working submatrix, take the one of
// smallest nonzero absolute value, breaking ties by lowest row then lowest
// column. This fixes U, D, V bit-for-bit across runs and platforms.
// ---------------------------------------------------------------------------

struct SmithResult {
  IntMatrix u, d, v;  // u * input * v == d, u and v unimodular

  std::vector<Int> diagonal() const {
    std::vector<Int> out;
    int n = std::min(d.rows(), d.cols());
    for (int i = 0; i < n; ++i) out.push_back(d.at(i, i));
    return out;
  }
};

inline SmithResult smith_normal_form(const IntMatrix& m) {
  int r = m.rows(), c = m.cols();
  SmithResult s{IntMatrix::identity(r), m, IntMatrix::identity(c)};
  IntMatrix& d = s.d;
  IntMatrix& u = s.u;
  IntMatrix& v = s.v;

  auto row_sub = [&](int i, int k, const Int& q) {  // row_i -= q * row_k
    for (int j = 0; j < c; ++j) d.at(i, j) -= q * d.at(k, j);
    for (int j = 0; j < r; ++j) u.at(i, j) -= q * u.at(k, j);
  };
  auto col_sub = [&](int j, int k, const Int& q) {  // col_j -= q * col_k
    for (int i = 0; i < r; ++i) d.at(i, j) -= q * d.at(i, k);
    for (int i = 0; i < c; ++i) v.at(i, j) -= q * v.at(i, k);
  };
  auto row_swap = [&](int i, int k) {
    if (i == k) return;
    for (int j = 0; j < c; ++j) std::swap(d.at(i, j), d.at(k, j));
    for (int j = 0; j < r; ++j) std::swap(u.at(i, j), u.at(k, j));
  };
  auto col_swap = [&](int j, int k) {
    if (j == k) return;
    for (int i = 0; i < r; ++i) std::swap(d.at(i, j), d.at(i, k));
    for (int i = 0; i < c; ++i) std::swap(v.at(i, j), v.at(i, k));
  };
  auto row_negate = [&](int i) {
    for (int j = 0; j < c; ++j) d.at(i, j) = -d.at(i, j);
    for (int j = 0; j < r; ++j) u.at(i, j) = -u.at(i, j);
  };

  int n = std::min(r, c);
  for (int t = 0; t < n; ++t) {
    for (;;) {
      // deterministic pivot search over the trailing submatrix
      int pi = -1, pj = -1;
      for (int i = t; i < r; ++i)
        for (int j = t; j < c; ++j) {
          const Int& x = d.at(i, j);
          if (x == 0) continue;
          if (pi < 0 || cmp(abs(x), abs(d.at(pi, pj))) < 0) {
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) {
        t = n;  // trailing block is zero
        break;
      }
      row_swap(t, pi);
      col_swap(t, pj);

      bool clean = true;
      for (int i = t + 1; i < r; ++i)
        if (d.at(i, t) != 0) {
          row_sub(i, t, fdiv(d.at(i, t), d.at(t, t)));
          if (d.at(i, t) != 0) clean = false;
        }
      for (int j = t + 1; j < c; ++j)
        if (d.at(t, j) != 0) {
          col_sub(j, t, fdiv(d.at(t, j), d.at(t, t)));
          if (d.at(t, j) != 0) clean = false;
        }
      if (!clean) continue;

      // pivot divides the rest of the submatrix, or fold an offender in
      bool divides_all = true;
      for (int i = t + 1; i < r && divides_all; ++i)
        for (int j = t + 1; j < c; ++j)
          if (!divides(d.at(t, t), d.at(i, j))) {
            row_sub(t, i, Int(-1));  // row_t += row_i
            divides_all = false;
            break;
          }
      if (divides_all) break;
    }
    if (t >= n) break;
    if (sgn(d.at(t, t)) < 0) row_negate(t);
  }
  return s;
}

inline std::vector<Int> smith_diagonal(const IntMatrix& m) {
  return smith_normal_form(m).diagonal();
}

// ---------------------------------------------------------------------------
// Column-style Hermite normal form, the canonical basis of a column lattice.
//
// After reduction the nonzero columns h_1..h_k satisfy: the pivot (first
// nonzero entry) of h_j sits in row pivot_row[j], pivot rows strictly
// increase, pivots are positive, and every entry of the pivot row in the
// columns to the *left* lies in [0, pivot). This form is unique, so lattices
// compare by comparing bases.
// ---------------------------------------------------------------------------

struct ColumnHermite {
  IntMatrix h;                 // dim x k, the canonical basis, k = lattice rank
  IntMatrix w;                 // input * w = [h | 0], w unimodular
  std::vector<int> pivot_row;  // size k, strictly increasing
};

inline ColumnHermite hermite_decompose(const IntMatrix& m) {
  int r = m.rows(), c = m.cols();
  IntMatrix h = m;
  IntMatrix w = IntMatrix::identity(c);

  auto col_sub = [&](int j, int k, const Int& q) {
    for (int i = 0; i < r; ++i) h.at(i, j) -= q * h.at(i, k);
    for (int i = 0; i < c; ++i) w.at(i, j) -= q * w.at(i, k);
  };
  auto col_swap = [&](int j, int k) {
    if (j == k) return;
    for (int i = 0; i < r; ++i) std::swap(h.at(i, j), h.at(i, k));
    for (int i = 0; i < c; ++i) std::swap(w.at(i, j), w.at(i, k));
  };
  auto col_negate = [&](int j) {
    for (int i = 0; i < r; ++i) h.at(i, j) = -h.at(i, j);
    for (int i = 0; i < c; ++i) w.at(i, j) = -w.at(i, j);
  };

  std::vector<int> pivots;
  int cur = 0;
  for (int row = 0; row < r && cur < c; ++row) {
    // eliminate row entries among columns >= cur down to a single pivot
    for (;;) {
      int best = -1;
      for (int j = cur; j < c; ++j) {
        const Int& x = h.at(row, j);
        if (x == 0) continue;
        if (best < 0 || cmp(abs(x), abs(h.at(row, best))) < 0) best = j;
      }
      if (best < 0) break;
      col_swap(cur, best);
      bool lone = true;
      for (int j = cur + 1; j < c; ++j)
        if (h.at(row, j) != 0) {
          col_sub(j, cur, fdiv(h.at(row, j), h.at(row, cur)));
          if (h.at(row, j) != 0) lone = false;
        }
      if (lone) break;
    }
    if (h.at(row, cur) == 0) continue;
    if (sgn(h.at(row, cur)) < 0) col_negate(cur);
    // canonicalize earlier columns against this pivot
    for (int j = 0; j < cur; ++j) {
      Int q = fdiv(h.at(row, j), h.at(row, cur));
      if (q != 0) col_sub(j, cur, q);
    }
    pivots.push_back(row);
    ++cur;
  }

  ColumnHermite out;
  out.pivot_row = pivots;
  out.w = w;
  out.h = IntMatrix(r, int(pivots.size()));
  for (int j = 0; j < int(pivots.size()); ++j)
    for (int i = 0; i < r; ++i) out.h.at(i, j) = h.at(i, j);
  return out;
}

// Basis of the integer kernel {x : m x = 0}, as columns.
inline IntMatrix kernel_basis(const IntMatrix& m) {
  ColumnHermite ch = hermite_decompose(m);
  int k = ch.h.cols();
  IntMatrix out(m.cols(), m.cols() - k);
  for (int j = k; j < m.cols(); ++j)
    for (int i = 0; i < m.cols(); ++i) out.at(i, j - k) = ch.w.at(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Lattice: a subgroup of Z^dim in canonical (Hermite) form.
// ---------------------------------------------------------------------------

class Lattice {
  int dim_ = 0;
  IntMatrix basis_;  // canonical column Hermite form
  std::vector<int> pivot_row_;

 public:
  Lattice() = default;
  explicit Lattice(int dim) : dim_(dim), basis_(dim, 0) {}

  static Lattice from_columns(int dim, const IntMatrix& gens) {
    require(gens.cols() == 0 || gens.rows() == dim, Errc::dimension_mismatch,
            "lattice generators of wrong dimension");
    Lattice l;
    l.dim_ = dim;
    IntMatrix g = gens.cols() == 0 ? IntMatrix(dim, 0) : gens;
    ColumnHermite ch = hermite_decompose(g);
    l.basis_ = ch.h;
    l.pivot_row_ = ch.pivot_row;
    return l;
  }

  int dim() const { return dim_; }
  int rank() const { return basis_.cols(); }
  const IntMatrix& basis() const { return basis_; }
  const std::vector<int>& pivot_rows() const { return pivot_row_; }

  bool operator==(const Lattice& o) const { return dim_ == o.dim_ && basis_ == o.basis_; }

  // Canonical representative of v modulo the lattice: pivot-row coordinates
  // are floor-reduced into [0, pivot).
  Vec reduce(Vec v) const {
    require(int(v.size()) == dim_, Errc::dimension_mismatch, "reduce: wrong dimension");
    for (int j = 0; j < basis_.cols(); ++j) {
      int p = pivot_row_[size_t(j)];
      Int q = fdiv(v[size_t(p)], basis_.at(p, j));
      if (q == 0) continue;
      for (int i = p; i < dim_; ++i) v[size_t(i)] -= q * basis_.at(i, j);
    }
    return v;
  }

  bool member(Vec v) const {
    require(int(v.size()) == dim_, Errc::dimension_mismatch, "member: wrong dimension");
    for (int j = 0; j < basis_.cols(); ++j) {
      int p = pivot_row_[size_t(j)];
      if (!divides(basis_.at(p, j), v[size_t(p)])) return false;
      Int q = exact_div(v[size_t(p)], basis_.at(p, j));
      if (q == 0) continue;
      for (int i = p; i < dim_; ++i) v[size_t(i)] -= q * basis_.at(i, j);
    }
    return is_zero(v);
  }

  bool contains(const Lattice& o) const {
    for (int j = 0; j < o.basis_.cols(); ++j)
      if (!member(o.basis_.col(j))) return false;
    return true;
  }

  bool is_full() const {
    if (rank() != dim_) return false;
    for (int j = 0; j < dim_; ++j)
      if (basis_.at(j, j) != 1) return false;
    return true;
  }

  Lattice sum(const Lattice& o) const {
    require(dim_ == o.dim_, Errc::dimension_mismatch, "lattice sum dims");
    return from_columns(dim_, hstack(basis_, o.basis_));
  }
};

// Inverse of a unimodular matrix: the Hermite form of a unimodular matrix is
// the identity, so the accumulated column transform is the inverse.
inline IntMatrix invert_unimodular(const IntMatrix& u) {
  ColumnHermite ch = hermite_decompose(u);
  internal_check(ch.h == IntMatrix::identity(u.rows()), "matrix is not unimodular");
  return ch.w;
}

// {x : m x lies in l}, as a lattice in the column space of m.
inline Lattice preimage_lattice(const IntMatrix& m, const Lattice& l) {
  require(m.rows() == l.dim(), Errc::dimension_mismatch, "preimage: shape");
  IntMatrix stacked = hstack(m, l.basis());
  IntMatrix ker = kernel_basis(stacked);
  IntMatrix xs(m.cols(), ker.cols());
  for (int j = 0; j < ker.cols(); ++j)
    for (int i = 0; i < m.cols(); ++i) xs.at(i, j) = ker.at(i, j);
  return Lattice::from_columns(m.cols(), xs);
}

// ---------------------------------------------------------------------------
// solve: one solution of m x = b over the integers, when one exists.
// The representative returned is the Hermite-reduction of any particular
// solution modulo the kernel lattice of m, hence deterministic.
// ---------------------------------------------------------------------------

inline std::optional<Vec> solve(const IntMatrix& m, const Vec& b) {
  require(int(b.size()) == m.rows(), Errc::dimension_mismatch, "solve: rhs dimension");
  ColumnHermite ch = hermite_decompose(m);
  Vec v = b;
  Vec coeff = zero_vec(ch.h.cols());
  for (int j = 0; j < ch.h.cols(); ++j) {
    int p = ch.pivot_row[size_t(j)];
    if (!divides(ch.h.at(p, j), v[size_t(p)])) return std::nullopt;
    Int q = exact_div(v[size_t(p)], ch.h.at(p, j));
    coeff[size_t(j)] = q;
    if (q != 0)
      for (int i = p; i < m.rows(); ++i) v[size_t(i)] -= q * ch.h.at(i, j);
  }
  if (!is_zero(v)) return std::nullopt;

  Vec x = zero_vec(m.cols());
  for (int i = 0; i < m.cols(); ++i) {
    Int s = 0;
    for (int j = 0; j < ch.h.cols(); ++j)
      if (coeff[size_t(j)] != 0) s += ch.w.at(i, j) * coeff[size_t(j)];
    x[size_t(i)] = s;
  }

  IntMatrix ker(m.cols(), m.cols() - ch.h.cols());
  for (int j = ch.h.cols(); j < m.cols(); ++j)
    for (int i = 0; i < m.cols(); ++i) ker.at(i, j - ch.h.cols()) = ch.w.at(i, j);
  return Lattice::from_columns(m.cols(), ker).reduce(x);
}

}  // namespace sesq
