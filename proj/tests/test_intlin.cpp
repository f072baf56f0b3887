#include <catch2/catch.hpp>

#include <random>

#include "sesq/fg_module.hpp"
#include "sesq/zalgebra.hpp"

using namespace sesq;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, int r, int c, int lo = -6, int hi = 6) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = d(rng);
  return m;
}

// Brute-force lattice membership for small 1- and 2-dimensional cases:
// enumerate coefficient boxes. Independent of the Hermite machinery.
bool member_by_enumeration(const IntMatrix& gens, const Vec& v, int box) {
  int k = gens.cols();
  std::vector<int> c(size_t(k), -box);
  if (k == 0) return is_zero(v);
  for (;;) {
    Vec s = zero_vec(gens.rows());
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < gens.rows(); ++i) s[size_t(i)] += Int(c[size_t(j)]) * gens.at(i, j);
    if (s == v) return true;
    int j = 0;
    while (j < k && ++c[size_t(j)] > box) {
      c[size_t(j)] = -box;
      ++j;
    }
    if (j == k) return false;
  }
}

}  // namespace

TEST_CASE("smith normal form on pinned cases") {
  SECTION("identity") {
    auto s = smith_normal_form(IntMatrix::identity(2));
    CHECK(s.d == IntMatrix::identity(2));
    CHECK(s.u * IntMatrix::identity(2) * s.v == s.d);
  }
  SECTION("2x2 with invariant factors 2 and 4") {
    // d1 = gcd of entries = 2, d1*d2 = |det| = |16 - 24| = 8
    IntMatrix m = IntMatrix::from_rows({{2, 4}, {6, 8}});
    auto s = smith_normal_form(m);
    CHECK(s.d.at(0, 0) == 2);
    CHECK(s.d.at(1, 1) == 4);
    CHECK(s.d.at(0, 1) == 0);
    CHECK(s.d.at(1, 0) == 0);
    CHECK(s.u * m * s.v == s.d);
    CHECK(abs(det(s.u)) == 1);
    CHECK(abs(det(s.v)) == 1);
  }
  SECTION("zero matrix") {
    IntMatrix z(3, 2);
    auto s = smith_normal_form(z);
    CHECK(s.d.is_zero());
  }
}

TEST_CASE("smith normal form properties on random matrices") {
  std::mt19937_64 rng(20240811);
  for (int trial = 0; trial < 60; ++trial) {
    int r = 1 + int(rng() % 5), c = 1 + int(rng() % 5);
    IntMatrix m = random_matrix(rng, r, c);
    auto s = smith_normal_form(m);
    REQUIRE(s.u * m * s.v == s.d);
    REQUIRE(abs(det(s.u)) == 1);
    REQUIRE(abs(det(s.v)) == 1);
    auto diag = s.diagonal();
    for (size_t i = 0; i + 1 < diag.size(); ++i) {
      REQUIRE(diag[i] >= 0);
      if (diag[i] == 0) REQUIRE(diag[i + 1] == 0);
      if (diag[i] != 0) REQUIRE(divides(diag[i], diag[i + 1]));
    }
    for (int i = 0; i < s.d.rows(); ++i)
      for (int j = 0; j < s.d.cols(); ++j)
        if (i != j) REQUIRE(s.d.at(i, j) == 0);
  }
}

TEST_CASE("smith normal form is deterministic") {
  std::mt19937_64 rng(7);
  IntMatrix m = random_matrix(rng, 4, 4);
  auto a = smith_normal_form(m);
  auto b = smith_normal_form(m);
  CHECK(a.u == b.u);
  CHECK(a.v == b.v);
  CHECK(a.d == b.d);
}

TEST_CASE("solve on pinned cases") {
  SECTION("divisible") {
    auto x = solve(IntMatrix::from_rows({{2}}), Vec{Int(4)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 2);
  }
  SECTION("parity obstruction") {
    CHECK_FALSE(solve(IntMatrix::from_rows({{2}}), Vec{Int(3)}).has_value());
  }
  SECTION("upper triangular") {
    auto x = solve(IntMatrix::from_rows({{1, 1}, {0, 2}}), Vec{Int(3), Int(2)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 2);
    CHECK((*x)[1] == 1);
  }
}

TEST_CASE("solve agrees with substitution on random systems") {
  std::mt19937_64 rng(99);
  int found = 0;
  for (int trial = 0; trial < 80; ++trial) {
    int r = 1 + int(rng() % 4), c = 1 + int(rng() % 4);
    IntMatrix m = random_matrix(rng, r, c, -4, 4);
    // build a solvable rhs from a random x, then check m * solve == rhs
    IntMatrix xs = random_matrix(rng, c, 1, -3, 3);
    Vec b = m * xs.col(0);
    auto x = solve(m, b);
    REQUIRE(x.has_value());
    REQUIRE(m * *x == b);
    ++found;
  }
  REQUIRE(found == 80);
}

TEST_CASE("lattice membership") {
  SECTION("2Z inside Z") {
    Lattice l = Lattice::from_columns(1, IntMatrix::from_rows({{2}}));
    CHECK(l.member(Vec{Int(4)}));
    CHECK_FALSE(l.member(Vec{Int(3)}));
  }
  SECTION("span (1,1) plus relation (0,2)") {
    Lattice l = Lattice::from_columns(2, IntMatrix::from_rows({{1, 0}, {1, 2}}));
    CHECK(l.member(Vec{Int(1), Int(3)}));
    CHECK_FALSE(l.member(Vec{Int(1), Int(2)}));
  }
  SECTION("agrees with brute-force enumeration") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
      IntMatrix gens = random_matrix(rng, 2, 2, -3, 3);
      Lattice l = Lattice::from_columns(2, gens);
      for (int vx = -4; vx <= 4; vx += 2)
        for (int vy = -3; vy <= 3; ++vy) {
          Vec v{Int(vx), Int(vy)};
          // box large enough: coefficients solving g*c = v are bounded by
          // |v| * |g| entries over |det|, well under 40 for this range
          REQUIRE(l.member(v) == member_by_enumeration(gens, v, 40));
        }
    }
  }
}

TEST_CASE("lattice reduce gives unique representatives") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    IntMatrix gens = random_matrix(rng, 3, 3, -4, 4);
    Lattice l = Lattice::from_columns(3, gens);
    IntMatrix v = random_matrix(rng, 3, 1, -9, 9);
    Vec a = v.col(0);
    Vec b = a;
    // shift by a lattice element, representatives must coincide
    for (int j = 0; j < gens.cols(); ++j)
      for (int i = 0; i < 3; ++i) b[size_t(i)] += gens.at(i, j);
    REQUIRE(l.reduce(a) == l.reduce(b));
    Vec diff = l.reduce(a);
    for (size_t i = 0; i < diff.size(); ++i) diff[i] -= a[i];
    REQUIRE(l.member(diff));
  }
}

TEST_CASE("quotient presentations") {
  SECTION("Z mod 2Z is cyclic of order 2") {
    FgModule z = FgModule::free(1);
    Subgroup two(z, IntMatrix::from_rows({{2}}));
    auto q = quotient(z, two);
    CHECK(q.quotient.torsion() == std::vector<Int>{Int(2)});
    CHECK(q.quotient.free_rank() == 0);
  }
  SECTION("Z^2 mod (2,0) is Z + Z/2") {
    FgModule z2 = FgModule::free(2);
    Subgroup s(z2, IntMatrix::from_rows({{2}, {0}}));
    auto q = quotient(z2, s);
    CHECK(q.quotient.free_rank() == 1);
    CHECK(q.quotient.torsion() == std::vector<Int>{Int(2)});
  }
  SECTION("M mod M is trivial") {
    FgModule z2 = FgModule::free(2);
    Subgroup s(z2, IntMatrix::identity(2));
    auto q = quotient(z2, s);
    CHECK(q.quotient.is_trivial());
  }
}

TEST_CASE("quotient then member on random subgroups") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    int r = 1 + int(rng() % 3);
    FgModule m(r, random_matrix(rng, r, int(rng() % 3), -3, 3));
    Subgroup s(m, random_matrix(rng, r, 1 + int(rng() % 3), -3, 3));
    auto q = quotient(m, s);
    for (int k = 0; k < 6; ++k) {
      Vec v = random_matrix(rng, r, 1, -5, 5).col(0);
      REQUIRE(s.member(v) == q.quotient.is_zero_element(v));
    }
  }
}

TEST_CASE("tensor products over Z") {
  ZAlgebra z = ZAlgebra::integers();
  auto with_action = [&](FgModule m) {
    return FgModule(m.rank(), m.relations().basis(), {IntMatrix::identity(m.rank())});
  };
  SECTION("Z tensor Z is Z") {
    FgModule t = tensor(with_action(FgModule::free(1)), with_action(FgModule::free(1)), z);
    CHECK(t.free_rank() == 1);
    CHECK(t.torsion().empty());
  }
  SECTION("Z/2 tensor Z/3 vanishes") {
    FgModule t = tensor(with_action(FgModule::cyclic(2)), with_action(FgModule::cyclic(3)), z);
    CHECK(t.is_trivial());
  }
  SECTION("tensor is symmetric on invariant factors") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
      int ra = 1 + int(rng() % 3), rb = 1 + int(rng() % 3);
      FgModule a = with_action(FgModule(ra, random_matrix(rng, ra, int(rng() % 3), -4, 4)));
      FgModule b = with_action(FgModule(rb, random_matrix(rng, rb, int(rng() % 3), -4, 4)));
      FgModule ab = tensor(a, b, z);
      FgModule ba = tensor(b, a, z);
      REQUIRE(ab.isomorphic_as_group(ba));
    }
  }
}

TEST_CASE("tensor over Z/4 of two copies of Z/2") {
  // Z/4 as an algebra of rank 1: basis {1}, relation 4
  ZAlgebra z4(1, {IntMatrix::identity(1)}, unit_vec(1, 0), IntMatrix::from_rows({{4}}));
  z4.validate();
  FgModule m(1, IntMatrix::from_rows({{2}}), {IntMatrix::identity(1)});
  FgModule t = tensor(m, m, z4);
  CHECK(t.torsion() == std::vector<Int>{Int(2)});
  CHECK(t.free_rank() == 0);
}

TEST_CASE("units of algebras") {
  SECTION("integers") {
    ZAlgebra z = ZAlgebra::integers();
    CHECK(is_unit(z, Vec{Int(-1)}));
    CHECK_FALSE(is_unit(z, Vec{Int(2)}));
  }
  SECTION("Z/5") {
    ZAlgebra z5(1, {IntMatrix::identity(1)}, unit_vec(1, 0), IntMatrix::from_rows({{5}}));
    CHECK(is_unit(z5, Vec{Int(2)}));
    auto inv = inverse(z5, Vec{Int(2)});
    REQUIRE(inv.has_value());
    CHECK(z5.mul(*inv, Vec{Int(2)}) == z5.reduce(z5.unit()));
  }
  SECTION("unit products stay units") {
    ZAlgebra z5(1, {IntMatrix::identity(1)}, unit_vec(1, 0), IntMatrix::from_rows({{5}}));
    for (long a = 1; a < 5; ++a)
      for (long b = 1; b < 5; ++b)
        if (is_unit(z5, Vec{Int(a)}) && is_unit(z5, Vec{Int(b)}))
          REQUIRE(is_unit(z5, z5.mul(Vec{Int(a)}, Vec{Int(b)})));
    REQUIRE(is_unit(z5, z5.unit()));
  }
}

TEST_CASE("ideal generation") {
  SECTION("principal ideal of Z") {
    ZAlgebra z = ZAlgebra::integers();
    Subgroup i = ideal_generated(z, {Vec{Int(2)}});
    CHECK(i.member(Vec{Int(4)}));
    CHECK_FALSE(i.member(Vec{Int(3)}));
  }
  SECTION("ideal (x - 1) in Z[x]/(x^2 - 1)") {
    // basis {1, x}, x * x = 1
    std::vector<IntMatrix> mult{IntMatrix::identity(2), IntMatrix::from_rows({{0, 1}, {1, 0}})};
    ZAlgebra r(2, mult, unit_vec(2, 0), IntMatrix(2, 0));
    r.validate();
    Subgroup i = ideal_generated(r, {Vec{Int(-1), Int(1)}});
    // x * (x - 1) = 1 - x, so the ideal is the rank-one span of x - 1
    CHECK(i.lattice().rank() == 1);
    CHECK(i.member(Vec{Int(1), Int(-1)}));
    CHECK_FALSE(i.member(Vec{Int(1), Int(0)}));
  }
  SECTION("empty generating set") {
    ZAlgebra z = ZAlgebra::integers();
    Subgroup i = ideal_generated(z, {});
    CHECK(i.lattice().rank() == 0);
  }
  SECTION("ideals are action stable") {
    std::vector<IntMatrix> mult{IntMatrix::identity(2), IntMatrix::from_rows({{0, 0}, {1, 1}})};
    // Z[e]/(e^2 = e): basis {1, e}
    ZAlgebra r(2, mult, unit_vec(2, 0), IntMatrix(2, 0));
    r.validate();
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      Vec g = random_matrix(rng, 2, 1, -3, 3).col(0);
      Subgroup i = ideal_generated(r, {g});
      for (int b = 0; b < 2; ++b)
        for (int j = 0; j < i.lattice().basis().cols(); ++j)
          REQUIRE(i.member(r.basis_mult()[size_t(b)] * i.lattice().basis().col(j)));
    }
  }
}

TEST_CASE("submodule presentations") {
  // subgroup of Z^2/(0,2) generated by (1,1)
  FgModule amb(2, IntMatrix::from_rows({{0}, {2}}));
  auto sp = submodule_presentation(amb, IntMatrix::from_rows({{1}, {1}}));
  CHECK(sp.sub.rank() == 1);
  CHECK(sp.sub.free_rank() == 1);
  // inclusion composed with relations stays consistent
  CHECK(sp.inclusion.col(0) == Vec{Int(1), Int(1)});
}

TEST_CASE("finite group element enumeration") {
  FgModule m(2, IntMatrix::from_rows({{2, 0}, {0, 3}}));
  auto elts = m.elements(Int(100));
  CHECK(elts.size() == 6);
  FgModule z = FgModule::free(1);
  CHECK_THROWS_AS(z.elements(Int(10)), Error);
}
