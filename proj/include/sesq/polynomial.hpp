#pragma once

#include "sesq/sesquiad.hpp"

namespace sesq {

// Polynomial with coefficients in a sesquiad, constant term first.
struct Polynomial {
  std::vector<int> coeff;  // element indices into the base sesquiad

  int degree() const {
    for (int i = int(coeff.size()) - 1; i >= 0; --i)
      if (coeff[size_t(i)] != 0) return i;
    return -1;  // zero polynomial
  }

  static Polynomial trimmed(std::vector<int> c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
    return Polynomial{std::move(c)};
  }
};

// Value of p at the element b of the target, inside the target's ring.
inline Vec poly_eval(const Polynomial& p, const SesquiadHom& into, int b) {
  const ZAlgebra& r = into.dst->ring;
  Vec x = into.dst->embed(b);
  Vec v = zero_vec(r.rank());
  for (int i = int(p.coeff.size()) - 1; i >= 0; --i) {
    v = r.mul(v, x);
    Vec c = into.dst->embed(into.map[size_t(p.coeff[size_t(i)])]);
    for (size_t t = 0; t < v.size(); ++t) v[t] += c[t];
    v = r.reduce(v);
  }
  return v;
}

inline Vec poly_eval(const Polynomial& p, const SesquiadPtr& a, int b) {
  return poly_eval(p, identity_hom(a), b);
}

inline std::vector<int> poly_roots(const Polynomial& p, const SesquiadPtr& a) {
  std::vector<int> roots;
  for (int b = 0; b < a->size(); ++b)
    if (is_zero(poly_eval(p, a, b))) roots.push_back(b);
  return roots;
}

// Synthetic division: p(X) = (X - b) q(X) with q over the target ring.
// Requires p(b) = 0; the quotient has degree deg(p) - 1.
inline std::vector<Vec> poly_divide(const Polynomial& p, const SesquiadHom& into, int b) {
  int deg = p.degree();
  require(deg >= 1, Errc::domain_error, "division needs a nonconstant polynomial");
  const ZAlgebra& r = into.dst->ring;
  Vec x = into.dst->embed(b);
  std::vector<Vec> q(static_cast<size_t>(deg));
  Vec carry = into.dst->embed(into.map[size_t(p.coeff[size_t(deg)])]);
  for (int i = deg - 1; i >= 0; --i) {
    q[size_t(i)] = carry;
    carry = r.mul(carry, x);
    Vec c = i < int(p.coeff.size()) ? into.dst->embed(into.map[size_t(p.coeff[size_t(i)])])
                                    : zero_vec(r.rank());
    for (size_t t = 0; t < carry.size(); ++t) carry[t] += c[t];
    carry = r.reduce(carry);
  }
  require(is_zero(carry), Errc::not_a_root, "element is not a root of the polynomial");
  return q;
}

inline Vec eval_ring_poly(const std::vector<Vec>& q, const ZAlgebra& r, const Vec& x) {
  Vec v = zero_vec(r.rank());
  for (int i = int(q.size()) - 1; i >= 0; --i) {
    v = r.mul(v, x);
    for (size_t t = 0; t < v.size(); ++t) v[t] += q[size_t(i)][t];
    v = r.reduce(v);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Separability of an element of an extension. The search enumerates all
// polynomials with coefficients in the base, degree by degree; separable
// means some vanishing polynomial has q(b) != 0 after splitting off (X - b).
// ---------------------------------------------------------------------------

enum class Separability { separable, inseparable, not_algebraic_up_to_cap };

struct SeparabilityResult {
  Separability verdict;
  Polynomial witness;     // the separating polynomial, when separable
  int degree_cap;
  bool search_exhaustive; // the target ring is finite, so inseparability is conclusive
};

inline SeparabilityResult is_separable(const SesquiadHom& ext, int b, int degree_cap,
                                       const Int& search_limit = Int(2000000)) {
  require(ext.injective_on_elements(), Errc::not_injective,
          "separability is defined for extensions");
  require(degree_cap >= 1, Errc::domain_error, "degree cap must be positive");
  int n = ext.src->size();
  Int total = 0, pw = 1;
  for (int d = 1; d <= degree_cap; ++d) {
    pw *= n;  // choices for coefficients 0..d-1 times nonzero leading
    total += pw * (n - 1);
  }
  require(total <= search_limit, Errc::cap_too_large, "separability search space too large");

  SeparabilityResult res{Separability::not_algebraic_up_to_cap, {}, degree_cap,
                         ext.dst->ring.underlying_module().is_finite()};
  for (int d = 1; d <= degree_cap; ++d) {
    std::vector<int> c(size_t(d) + 1);
    c[size_t(d)] = 1;
    for (;;) {
      Polynomial p{c};
      if (is_zero(poly_eval(p, ext, b))) {
        auto q = poly_divide(p, ext, b);
        if (!is_zero(eval_ring_poly(q, ext.dst->ring, ext.dst->embed(b)))) {
          res.verdict = Separability::separable;
          res.witness = p;
          return res;
        }
        res.verdict = Separability::inseparable;
      }
      // next coefficient tuple: positions 0..d-1 over all elements, leading
      // position over nonzero elements
      int pos = 0;
      while (pos <= d) {
        int lo = pos == d ? 1 : 0;
        if (++c[size_t(pos)] < n) break;
        c[size_t(pos)] = lo;
        ++pos;
      }
      if (pos > d) break;
    }
  }
  return res;
}

struct ClosureResult {
  bool closed;
  Polynomial counterexample;  // first nonconstant polynomial with no root, if any
};

inline ClosureResult is_algebraically_closed_upto(const SesquiadPtr& a, int degree_cap,
                                                  const Int& search_limit = Int(2000000)) {
  require(degree_cap >= 1, Errc::domain_error, "degree cap must be positive");
  if (a->is_zero_sesquiad()) return {true, {}};
  int n = a->size();
  Int total = 0, pw = 1;
  for (int d = 1; d <= degree_cap; ++d) {
    pw *= n;
    total += pw * (n - 1);
  }
  require(total <= search_limit, Errc::cap_too_large, "closure search space too large");
  for (int d = 1; d <= degree_cap; ++d) {
    std::vector<int> c(size_t(d) + 1);
    c[size_t(d)] = 1;
    for (;;) {
      Polynomial p{c};
      if (poly_roots(p, a).empty()) return {false, p};
      int pos = 0;
      while (pos <= d) {
        int lo = pos == d ? 1 : 0;
        if (++c[size_t(pos)] < n) break;
        c[size_t(pos)] = lo;
        ++pos;
      }
      if (pos > d) break;
    }
  }
  return {true, {}};
}

}  // namespace sesq
