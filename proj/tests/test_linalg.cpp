#include <catch_amalgamated.hpp>

#include <random>

#include "ddbar/linalg.hpp"
#include "oracles.hpp"

using namespace ddbar;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, int lo = -3, int hi = 3) {
  std::uniform_int_distribution<int> e(lo, hi), den(1, 3);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      m(i, j) = Rational(e(rng), den(rng));
      m(i, j).canonicalize();
    }
  return m;
}

// Low-rank products so that rank deficiency is common.
Matrix random_low_rank(std::size_t r, std::size_t c, std::size_t k, std::mt19937_64& rng) {
  return random_matrix(r, k, rng) * random_matrix(k, c, rng);
}

}  // namespace

TEST_CASE("rational parsing", "[linalg]") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational(" -4/6 ") == Rational(-2, 3));
  CHECK(parse_rational("+5/10") == Rational(1, 2));
  CHECK(parse_rational("123456789012345678901234567890/3").get_num() == Integer("41152263004115226300411522630"));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("2//3"), ParseError);
  try {
    parse_rational("12x");
    FAIL("no exception");
  } catch (const ParseError& e) {
    CHECK(e.position == 2);
  }
}

TEST_CASE("rank agrees with minors and with an independent elimination", "[linalg]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4, k = rng() % 4;
    const Matrix m = trial % 2 ? random_matrix(r, c, rng) : random_low_rank(r, c, k, rng);
    const auto want = oracle::rank_by_minors(oracle::from(m));
    CHECK(rank(m) == want);
    CHECK(rref(m).rank == want);
    CHECK(oracle::rank(oracle::from(m)) == want);
  }
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t r = 3 + rng() % 8, c = 3 + rng() % 8, k = rng() % 7;
    const Matrix m = random_low_rank(r, c, k, rng);
    CHECK(rank(m) == oracle::rank(oracle::from(m)));
  }
}

TEST_CASE("rank of empty and zero matrices", "[linalg]") {
  CHECK(rank(Matrix(0, 0)) == 0);
  CHECK(rank(Matrix(0, 5)) == 0);
  CHECK(rank(Matrix(5, 0)) == 0);
  CHECK(rank(Matrix(3, 3)) == 0);
  CHECK(rank(Matrix::identity(4)) == 4);
}

TEST_CASE("large entries stay exact", "[linalg]") {
  Matrix m(3, 3);
  const Integer big("1000000000000000000000000000007");
  m(0, 0) = Rational(big);
  m(0, 1) = 1;
  m(1, 0) = Rational(big * big);
  m(1, 1) = Rational(big);
  m(2, 2) = Rational(1, big);
  // second row is big times the first
  CHECK(rank(m) == 2);
  m(1, 1) += Rational(1, big);
  CHECK(rank(m) == 3);
}

TEST_CASE("kernel, image and solve", "[linalg]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    const Matrix m = random_low_rank(r, c, rng() % 4, rng);
    const Subspace k = kernel_basis(m);
    CHECK(k.dim() + rank(m) == c);
    CHECK((m * k.basis()).is_zero());
    CHECK(k.dim() == oracle::nullspace(oracle::from(m), c).size());
    const Subspace im = image_basis(m);
    CHECK(im.dim() == rank(m));
    // a random vector in the image is solvable, one outside is not
    Vector x(c);
    for (auto& v : x) v = static_cast<int>(rng() % 5) - 2;
    const Vector b = m * x;
    auto s = solve(m, b);
    REQUIRE(s);
    CHECK(m * *s == b);
    if (!im.is_full()) {
      Vector e(r, 0);
      for (std::size_t i = 0; i < r; ++i) {
        e.assign(r, 0);
        e[i] = 1;
        if (!im.contains(e)) break;
      }
      CHECK_FALSE(solve(m, e));
    }
  }
}

TEST_CASE("inverse", "[linalg]") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const Matrix m = random_matrix(n, n, rng);
    if (rank(m) < n) {
      CHECK_THROWS_AS(inverse(m), SingularMatrix);
      continue;
    }
    CHECK(m * inverse(m) == Matrix::identity(n));
    CHECK(oracle::det(oracle::from(m)) != 0);
  }
}

TEST_CASE("subspace arithmetic against dimension formulas", "[linalg]") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const Subspace a = Subspace::span(random_low_rank(n, 1 + rng() % 4, rng() % 4, rng));
    const Subspace b = Subspace::span(random_low_rank(n, 1 + rng() % 4, rng() % 4, rng));
    const Subspace s = subspace_sum(a, b), i = subspace_intersection(a, b);
    CHECK(s.dim() + i.dim() == a.dim() + b.dim());
    CHECK(s.contains(a));
    CHECK(s.contains(b));
    CHECK(a.contains(i));
    CHECK(b.contains(i));
    CHECK(quotient_dim(s, a) == s.dim() - a.dim());
    // canonical form: equal spaces compare equal whatever the generators
    CHECK(Subspace::span(hstack(a.basis(), a.basis())) == a);
    // the dimension of the sum from an independent rank computation
    oracle::Mat gens;
    for (std::size_t j = 0; j < a.dim(); ++j) gens.push_back(a.basis().column(j));
    for (std::size_t j = 0; j < b.dim(); ++j) gens.push_back(b.basis().column(j));
    CHECK(s.dim() == oracle::span_dim(gens));
  }
}

TEST_CASE("brute-force membership over a tiny field of coefficients", "[linalg]") {
  // Every combination of the generators with coefficients in {-1,0,1} is a
  // member, and the unit vectors outside the span are not.
  Matrix g(4, 2);
  g(0, 0) = 1;
  g(1, 0) = 2;
  g(2, 1) = 1;
  g(3, 1) = Rational(1, 2);
  const Subspace s = Subspace::span(g);
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      Vector v(4);
      for (std::size_t i = 0; i < 4; ++i) v[i] = a * g(i, 0) + b * g(i, 1);
      CHECK(s.contains(v));
    }
  for (std::size_t i = 0; i < 4; ++i) {
    Vector e(4, 0);
    e[i] = 1;
    CHECK_FALSE(s.contains(e));
  }
}

TEST_CASE("quotient bases", "[linalg]") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    const Subspace big = Subspace::span(random_low_rank(n, 4, 1 + rng() % 4, rng));
    Matrix sub = big.basis() * random_low_rank(big.dim(), 2, rng() % 3, rng);
    const Subspace small = Subspace::span(sub);
    const QuotientBasis qb(big, small);
    CHECK(qb.dim() == big.dim() - small.dim());
    CHECK(subspace_sum(small, Subspace::span(qb.representatives())) == big);
    for (std::size_t j = 0; j < small.dim(); ++j) CHECK(qb.is_zero_class(small.basis().column(j)));
    for (std::size_t j = 0; j < qb.dim(); ++j) {
      Vector want(qb.dim(), 0);
      want[j] = 1;
      CHECK(qb.coordinates(qb.representatives().column(j)) == want);
    }
  }
  const Subspace line = Subspace::span(Matrix::identity(2).block(0, 0, 2, 1));
  CHECK_THROWS_AS(QuotientBasis(line, Subspace::full(2)), ContainmentViolation);
}

TEST_CASE("tower systems", "[linalg]") {
  // x0 in Q^2 with A x0 = B x1 for some x1: the answer is the preimage of Im B.
  Matrix A(2, 2), B(2, 1);
  A(0, 0) = 1;
  A(1, 1) = 1;
  B(0, 0) = 1;
  TowerSystem sys;
  sys.block_dims = {2, 1};
  sys.stages.push_back({{{0, A}, {1, -B}}});
  const Subspace x0 = solve_tower(sys, 0);
  CHECK(x0.dim() == 1);
  Vector e0{1, 0};
  CHECK(x0.contains(e0));
  sys.stages.push_back({{{1, Matrix(3, 2)}}});
  CHECK_THROWS_AS(sys.assemble(), DimensionMismatch);
}
