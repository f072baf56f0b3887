#pragma once

#include <algorithm>
#include <initializer_list>
#include <sstream>
#include <utility>

#include "sesq/basic.hpp"

namespace sesq {

// Dense matrix of arbitrary-precision integers, row-major.
// Immutable in spirit: operations return new values, mutation is only used
// while an algorithm owns its working copy.
class IntMatrix {
  int rows_ = 0, cols_ = 0;
  std::vector<Int> a_;

 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * size_t(cols)) {}

  static IntMatrix identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    int r = int(rows.size());
    int c = r == 0 ? 0 : int(rows.begin()->size());
    IntMatrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
      require(int(row.size()) == c, Errc::dimension_mismatch, "ragged row list");
      int j = 0;
      for (long x : row) m.at(i, j++) = x;
      ++i;
    }
    return m;
  }

  static IntMatrix from_cols(int dim, const std::vector<Vec>& cols) {
    IntMatrix m(dim, int(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) {
      require(int(cols[j].size()) == dim, Errc::dimension_mismatch, "column of wrong dimension");
      for (int i = 0; i < dim; ++i) m.at(i, int(j)) = cols[j][size_t(i)];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Int& at(int i, int j) { return a_[size_t(i) * size_t(cols_) + size_t(j)]; }
  const Int& at(int i, int j) const { return a_[size_t(i) * size_t(cols_) + size_t(j)]; }

  Vec col(int j) const {
    Vec v = zero_vec(rows_);
    for (int i = 0; i < rows_; ++i) v[size_t(i)] = at(i, j);
    return v;
  }

  Vec row(int i) const {
    Vec v = zero_vec(cols_);
    for (int j = 0; j < cols_; ++j) v[size_t(j)] = at(i, j);
    return v;
  }

  void set_col(int j, const Vec& v) {
    for (int i = 0; i < rows_; ++i) at(i, j) = v[size_t(i)];
  }

  std::vector<Vec> columns() const {
    std::vector<Vec> out;
    out.reserve(size_t(cols_));
    for (int j = 0; j < cols_; ++j) out.push_back(col(j));
    return out;
  }

  bool is_zero() const {
    for (const Int& x : a_)
      if (x != 0) return false;
    return true;
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  IntMatrix operator*(const IntMatrix& b) const {
    require(cols_ == b.rows_, Errc::dimension_mismatch, "matrix product shape");
    IntMatrix c(rows_, b.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Int& aik = at(i, k);
        if (aik == 0) continue;
        for (int j = 0; j < b.cols_; ++j) c.at(i, j) += aik * b.at(k, j);
      }
    return c;
  }

  Vec operator*(const Vec& v) const {
    require(int(v.size()) == cols_, Errc::dimension_mismatch, "matrix-vector shape");
    Vec out = zero_vec(rows_);
    for (int i = 0; i < rows_; ++i) {
      Int s = 0;
      for (int j = 0; j < cols_; ++j)
        if (at(i, j) != 0) s += at(i, j) * v[size_t(j)];
      out[size_t(i)] = s;
    }
    return out;
  }

  IntMatrix operator+(const IntMatrix& b) const {
    require(rows_ == b.rows_ && cols_ == b.cols_, Errc::dimension_mismatch, "matrix sum shape");
    IntMatrix c = *this;
    for (size_t i = 0; i < a_.size(); ++i) c.a_[i] += b.a_[i];
    return c;
  }

  IntMatrix operator-(const IntMatrix& b) const {
    require(rows_ == b.rows_ && cols_ == b.cols_, Errc::dimension_mismatch, "matrix diff shape");
    IntMatrix c = *this;
    for (size_t i = 0; i < a_.size(); ++i) c.a_[i] -= b.a_[i];
    return c;
  }

  IntMatrix scaled(const Int& k) const {
    IntMatrix c = *this;
    for (Int& x : c.a_) x *= k;
    return c;
  }

  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
      os << (i ? "; " : "");
      for (int j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).get_str();
    }
    os << "]";
    return os.str();
  }
};

inline IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() == 0 && a.rows() == 0) return b;
  if (b.cols() == 0 && b.rows() == 0) return a;
  require(a.rows() == b.rows(), Errc::dimension_mismatch, "hstack row counts");
  IntMatrix c(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols(); ++j) c.at(i, a.cols() + j) = b.at(i, j);
  }
  return c;
}

inline IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
  require(a.cols() == b.cols(), Errc::dimension_mismatch, "vstack col counts");
  IntMatrix c(a.rows() + b.rows(), a.cols());
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < a.rows(); ++i) c.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows(); ++i) c.at(a.rows() + i, j) = b.at(i, j);
  }
  return c;
}

inline IntMatrix block_diag(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix c(a.rows() + b.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) c.at(a.rows() + i, a.cols() + j) = b.at(i, j);
  return c;
}

inline IntMatrix kron(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (a.at(i, j) == 0) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          c.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
    }
  return c;
}

inline Vec concat(const Vec& a, const Vec& b) {
  Vec c = a;
  c.insert(c.end(), b.begin(), b.end());
  return c;
}

// Kronecker product of vectors, matching kron() of the matrices acting on them.
inline Vec kron_vec(const Vec& a, const Vec& b) {
  Vec c(a.size() * b.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i * b.size() + j] = a[i] * b[j];
  return c;
}

// Exact determinant by fraction-free (Bareiss) elimination.
inline Int det(const IntMatrix& m) {
  require(m.rows() == m.cols(), Errc::dimension_mismatch, "det of non-square matrix");
  int n = m.rows();
  if (n == 0) return 1;
  IntMatrix w = m;
  Int sign = 1, prev = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (w.at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (w.at(i, k) != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        w.at(i, j) = exact_div(w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j), prev);
    prev = w.at(k, k);
  }
  return sign * w.at(n - 1, n - 1);
}

}  // namespace sesq
