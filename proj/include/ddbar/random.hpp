#pragma once

// Seeded random complexes: direct sums of indecomposables hidden behind a
// random change of basis, so the ground truth is known.

#include <cstdint>
#include <random>

#include "ddbar/shapes.hpp"

namespace ddbar {

struct RandomComplex {
  DoubleComplex complex;
  std::vector<Shape> summands;  // hidden ground truth, in insertion order
  BasisChange transforms;
};

inline Matrix random_invertible(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> entry(-2, 2);
  for (;;) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(rng);
    if (rank(m) == n) return m;
  }
}

inline BasisChange random_basis_change(const DoubleComplex& c, std::mt19937_64& rng) {
  BasisChange t;
  for (const auto& b : c.bidegrees())
    if (c.dim(b) > 0) t[b] = random_invertible(c.dim(b), rng);
  return t;
}

// Up to max_shapes indecomposables (0 = no limit), each component at most max_dim.
inline RandomComplex random_direct_sum(Grid g, std::size_t max_dim, std::size_t max_shapes, std::uint64_t seed,
                                       bool scramble = true) {
  std::mt19937_64 rng(seed);
  RandomComplex out;
  out.complex = DoubleComplex(g);
  if (max_dim == 0 || g.P <= 0 || g.Q <= 0) return out;
  const auto shapes = enumerate_shapes(g);
  std::map<Bidegree, std::size_t> used;
  std::size_t target = max_shapes;
  if (target == 0) target = static_cast<std::size_t>(g.P * g.Q) * max_dim;
  std::uniform_int_distribution<std::size_t> count(1, target);
  const std::size_t wanted = max_shapes == 0 ? target : count(rng);
  std::uniform_int_distribution<std::size_t> pick(0, shapes.size() - 1);
  for (std::size_t attempt = 0; attempt < 4 * wanted && out.summands.size() < wanted; ++attempt) {
    const Shape& s = shapes[pick(rng)];
    bool ok = true;
    for (const auto& b : support(s))
      if (used[b] + 1 > max_dim) ok = false;
    if (!ok) continue;
    for (const auto& b : support(s)) ++used[b];
    out.summands.push_back(s);
  }
  DoubleComplex sum(g);
  for (const auto& s : out.summands) sum = direct_sum(sum, build_shape(s, g));
  if (scramble) {
    out.transforms = random_basis_change(sum, rng);
    out.complex = change_of_basis(sum, out.transforms);
  } else {
    out.complex = std::move(sum);
  }
  out.complex.set_name("random(seed=" + std::to_string(seed) + ")");
  return out;
}

inline DoubleComplex random_complex(Grid g, std::size_t max_dim, std::uint64_t seed) {
  return random_direct_sum(g, max_dim, 0, seed).complex;
}

}  // namespace ddbar
