#include <catch_amalgamated.hpp>

#include <random>

#include "ddbar/hodge.hpp"
#include "ddbar/random.hpp"
#include "oracles.hpp"

using namespace ddbar;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = static_cast<int>(rng() % 5) - 2;
  return m;
}

Matrix random_spd(std::size_t n, std::mt19937_64& rng) {
  const Matrix a = random_matrix(n, n, rng);
  return a.transpose() * a + Matrix::identity(n);
}

InnerProduct random_inner_product(const DoubleComplex& c, std::mt19937_64& rng) {
  std::map<Bidegree, Matrix> g;
  for (const auto& b : c.bidegrees())
    if (c.dim(b)) g[b] = random_spd(c.dim(b), rng);
  return InnerProduct(g);
}

Rational dot(const Vector& x, const Matrix& g, const Vector& y) {
  Rational s = 0;
  const Vector gy = g * y;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * gy[i];
  return s;
}

}  // namespace

TEST_CASE("adjoints", "[hodge]") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 4, m = 1 + rng() % 4;
    const Matrix a = random_matrix(m, n, rng);
    CHECK(adjoint(a, Matrix::identity(n), Matrix::identity(m)) == a.transpose());
    const Matrix gs = random_spd(n, rng), gd = random_spd(m, rng);
    const Matrix adj = adjoint(a, gs, gd);
    CHECK(adjoint(adj, gd, gs) == a);
    const Vector x = random_matrix(n, 1, rng).column(0), y = random_matrix(m, 1, rng).column(0);
    CHECK(dot(a * x, gd, y) == dot(x, gs, adj * y));
  }
  Matrix bad(2, 2);
  bad(0, 0) = 1;
  bad(1, 1) = -1;
  CHECK_FALSE(is_positive_definite(bad));
  bad(1, 1) = 1;
  bad(0, 1) = 2;
  CHECK_FALSE(is_positive_definite(bad));  // not symmetric
  bad(1, 0) = 2;
  CHECK_FALSE(is_positive_definite(bad));  // indefinite
  bad(1, 1) = 5;
  CHECK(is_positive_definite(bad));

  const DoubleComplex dot1 = build_zigzag(ZigzagShape{{0, 0}, 1, false, false});
  const InnerProduct negative(std::map<Bidegree, Matrix>{{{0, 0}, Rational(-1) * Matrix::identity(1)}});
  CHECK_THROWS_AS(validate_inner_product(dot1, negative), InvalidInput);
}

TEST_CASE("harmonic spaces have the page dimensions", "[hodge]") {
  std::mt19937_64 rng(12);
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const DoubleComplex c = random_complex(Grid{4, 4}, 3, seed);
    const PageTable pt = page_dims(c, 4, false);
    for (bool identity : {true, false}) {
      const InnerProduct ip = identity ? InnerProduct() : random_inner_product(c, rng);
      const HarmonicTower t = harmonic_tower(c, ip, 4);
      CHECK(t.laplacian_kernels_agree);
      CHECK(t.d_operator_valid);
      for (int r = 1; r <= 4; ++r)
        for (const auto& b : c.bidegrees()) {
          INFO("seed " << seed << " r=" << r << " (" << b.p << "," << b.q << ")");
          CHECK(t.h(r, b).dim() == pt.at(r, b.p, b.q));
          if (r > 1) CHECK(t.h(r - 1, b).contains(t.h(r, b)));
          // H_r = Z_r ∩ E_r^*-closed
          const Subspace z = tower_space(c, TowerKind::ErClosed, r, b.p, b.q);
          const Subspace zs = star_tower_space(c, ip, TowerKind::ErClosed, r, b.p, b.q);
          CHECK(t.h(r, b) == subspace_intersection(z, zs));
        }
    }
  }
}

TEST_CASE("first harmonic space is the kernel of the Laplacian", "[hodge]") {
  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    const DoubleComplex c = random_complex(Grid{4, 4}, 3, seed);
    const HarmonicTower t = harmonic_tower(c, InnerProduct(), 1);
    for (const auto& b : c.bidegrees()) {
      // ker d2 ∩ ker d2^T for the incoming map
      oracle::Mat stacked = oracle::from(c.d2(b.p, b.q));
      for (const auto& row : oracle::from(c.d2(b.p, b.q - 1).transpose())) stacked.push_back(row);
      CHECK(t.h(1, b).dim() == oracle::nullspace(stacked, c.dim(b)).size());
      CHECK(star_tower_space(c, InnerProduct(), TowerKind::ErClosed, 1, b.p, b.q) ==
            kernel_basis(c.d2(b.p, b.q - 1).transpose()));
    }
  }
}

TEST_CASE("small examples", "[hodge]") {
  const DoubleComplex dot = build_zigzag(ZigzagShape{{1, 1}, 1, false, false});
  const HarmonicTower td = harmonic_tower(dot, InnerProduct(), 3);
  for (int r = 1; r <= 3; ++r) CHECK(td.h(r, {1, 1}).is_full());
  const ThreeSpaceDecomposition dd = three_space_decomposition(dot, InnerProduct(), td, 2, 1, 1);
  CHECK(dd.harmonic.dim() == 1);
  CHECK(dd.exact.dim() == 0);
  CHECK(dd.coexact.dim() == 0);
  CHECK(dd.ok());
  const BcaHarmonic hd = bc_a_harmonic_spaces(dot, InnerProduct(), 2, 1, 1);
  CHECK(hd.bc.dim() == 1);
  CHECK(hd.a.dim() == 1);

  const DoubleComplex z2 = build_zigzag(ZigzagShape{{0, 1}, 1, false, true});
  const HarmonicTower tz = harmonic_tower(z2, InnerProduct(), 2);
  CHECK(tz.h(1, {0, 1}).dim() == 1);
  CHECK(tz.h(1, {1, 1}).dim() == 1);
  CHECK(tz.h(2, {0, 1}).dim() == 0);
  CHECK(tz.h(2, {1, 1}).dim() == 0);

  const DoubleComplex sq = build_square(0, 0);
  const HarmonicTower ts = harmonic_tower(sq, InnerProduct(), 1);
  const ThreeSpaceDecomposition ds = three_space_decomposition(sq, InnerProduct(), ts, 1, 0, 0);
  CHECK(ds.harmonic.dim() == 0);
  CHECK(ds.exact.dim() == 0);
  CHECK(ds.coexact.dim() == 1);
  CHECK(ds.ok());

  const DoubleComplex l3 = build_zigzag(ZigzagShape{{0, 1}, 1, true, true});
  for (Bidegree b : {Bidegree{0, 2}, Bidegree{1, 1}}) {
    const BcaHarmonic h = bc_a_harmonic_spaces(l3, InnerProduct(), 2, b.p, b.q);
    CHECK(h.bc.dim() == 1);
    CHECK(h.a.dim() == 0);
  }
}

TEST_CASE("three-space decompositions", "[hodge]") {
  std::mt19937_64 rng(77);
  for (std::uint64_t seed = 40; seed < 50; ++seed) {
    const DoubleComplex c = random_complex(Grid{4, 4}, 3, seed);
    const InnerProduct ip = seed % 2 ? InnerProduct() : random_inner_product(c, rng);
    const HarmonicTower t = harmonic_tower(c, ip, 4);
    for (int r = 1; r <= 4; ++r)
      for (const auto& [p, q] : c.bidegrees()) {
        const ThreeSpaceDecomposition d = three_space_decomposition(c, ip, t, r, p, q);
        INFO("seed " << seed << " r=" << r << " (" << p << "," << q << ")");
        CHECK(d.orthogonal);
        CHECK(d.dims_sum);
        CHECK(d.exact_is_cr);
        CHECK(d.coexact_is_star);
        CHECK(d.z_split);
      }
  }
}

TEST_CASE("Bott-Chern and Aeppli harmonic spaces", "[hodge]") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const DoubleComplex c = random_complex(Grid{4, 4}, 3, seed);
    const BcaTable bt = bca_dims(c, 3);
    const InnerProduct ip = seed % 3 ? InnerProduct() : random_inner_product(c, rng);
    for (int r = 1; r <= 3; ++r)
      for (const auto& [p, q] : c.bidegrees()) {
        const BcaHarmonic h = bc_a_harmonic_spaces(c, ip, r, p, q);
        CHECK(h.bc.dim() == bt.bc_at(r, p, q));
        CHECK(h.a.dim() == bt.a_at(r, p, q));
        // star-closed forms are orthogonal to the E_r Ebar_r-exact ones
        const Matrix g = ip.gram({p, q}, c.dim(p, q));
        CHECK(orthogonal(star_ererbar_closed_space(c, ip, r, p, q), ererbar_exact_space(c, r, p, q), g));
      }
  }
}
