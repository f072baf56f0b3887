#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace sesq {

// Exact arithmetic only: every quantity in this library is an mpz integer,
// a vector of them, or a structure built from those.
using Int = mpz_class;
using Vec = std::vector<Int>;

enum class Errc {
  dimension_mismatch,
  not_a_monoid,
  not_embeddable,
  not_multiplicative,
  no_ring_extension,
  bound_exceeded,
  not_prime,
  not_a_root,
  cap_too_large,
  not_injective,
  not_equivariant,
  no_linear_extension,
  not_a_submodule,
  base_mismatch,
  not_bilinear,
  not_composable,
  not_simple,
  not_flabby,
  syntax_error,
  unknown_reference,
  invariant_violation,
  domain_error,
};

inline const char* errc_name(Errc e) {
  switch (e) {
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::not_a_monoid: return "NotAMonoid";
    case Errc::not_embeddable: return "NotEmbeddable";
    case Errc::not_multiplicative: return "NotMultiplicative";
    case Errc::no_ring_extension: return "NoRingExtension";
    case Errc::bound_exceeded: return "BoundExceeded";
    case Errc::not_prime: return "NotPrime";
    case Errc::not_a_root: return "NotARoot";
    case Errc::cap_too_large: return "CapTooLarge";
    case Errc::not_injective: return "NotInjective";
    case Errc::not_equivariant: return "NotEquivariant";
    case Errc::no_linear_extension: return "NoLinearExtension";
    case Errc::not_a_submodule: return "NotASubmodule";
    case Errc::base_mismatch: return "BaseMismatch";
    case Errc::not_bilinear: return "NotBilinear";
    case Errc::not_composable: return "NotComposable";
    case Errc::not_simple: return "NotSimple";
    case Errc::not_flabby: return "NotFlabby";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::unknown_reference: return "UnknownReference";
    case Errc::invariant_violation: return "InvariantViolation";
    case Errc::domain_error: return "DomainError";
  }
  return "Error";
}

// Domain error: the input violates a documented precondition.
class Error : public std::runtime_error {
  Errc kind_;

 public:
  Error(Errc kind, const std::string& msg)
      : std::runtime_error(std::string(errc_name(kind)) + ": " + msg), kind_(kind) {}
  Errc kind() const { return kind_; }
};

// A provably-impossible state was reached: this is a bug in the library,
// not a problem with the input.
class InternalInconsistency : public std::logic_error {
 public:
  explicit InternalInconsistency(const std::string& msg)
      : std::logic_error("InternalInconsistency: " + msg) {}
};

[[noreturn]] inline void fail(Errc kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, Errc kind, const char* msg) {
  if (!cond) fail(kind, msg);
}

inline void require(bool cond, Errc kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

inline void internal_check(bool cond, const char* msg) {
  if (!cond) throw InternalInconsistency(msg);
}

inline bool is_zero(const Vec& v) {
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

inline Vec zero_vec(int n) { return Vec(size_t(n)); }

inline Vec unit_vec(int n, int i) {
  Vec v = zero_vec(n);
  v[size_t(i)] = 1;
  return v;
}

// Floor division, so residues land in [0, |b|).
inline Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline bool divides(const Int& d, const Int& a) {
  if (d == 0) return a == 0;
  return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline Int exact_div(const Int& a, const Int& d) {
  Int q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
  return q;
}

// Lexicographic order on integer vectors; the tie-break everywhere a
// canonical ordering of elements or points is needed.
inline int vec_cmp(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = 0; i < a.size(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

struct VecLess {
  bool operator()(const Vec& a, const Vec& b) const { return vec_cmp(a, b) < 0; }
};

}  // namespace sesq
