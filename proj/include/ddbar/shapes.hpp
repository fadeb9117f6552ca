#pragma once

// Indecomposable double complexes: squares and zigzags (dots included).

#include <algorithm>
#include <string>
#include <variant>
#include <vector>

#include "ddbar/bicomplex.hpp"

namespace ddbar {

struct Square {
  Bidegree at;
  friend bool operator==(const Square&, const Square&) = default;
};

// Generators a_1..a_l sit at start + (i-1)*(1,-1).  c_i = d1 a_i = d2 a_{i+1}
// sits at start + (i, 1-i); c_0 = d2 a_1 exists iff left, c_l = d1 a_l iff right.
struct ZigzagShape {
  Bidegree start;
  int generators = 1;
  bool left = false;   // has_outgoing_d2_on_first
  bool right = false;  // has_outgoing_d1_on_last

  static ZigzagShape from_generators(const std::vector<Bidegree>& gens, bool left, bool right) {
    if (gens.empty()) throw InvalidInput("zigzag needs at least one generator");
    for (std::size_t i = 1; i < gens.size(); ++i)
      if (gens[i].p != gens[i - 1].p + 1 || gens[i].q != gens[i - 1].q - 1)
        throw InvalidInput("malformed staircase: generator " + std::to_string(i) + " at (" + to_string(gens[i]) +
                           ") does not follow (" + to_string(gens[i - 1]) + ") by (+1,-1)");
    return ZigzagShape{gens.front(), static_cast<int>(gens.size()), left, right};
  }

  std::vector<Bidegree> generator_bidegrees() const {
    std::vector<Bidegree> g;
    for (int i = 0; i < generators; ++i) g.push_back({start.p + i, start.q - i});
    return g;
  }

  int length() const noexcept { return 2 * generators - 1 + (left ? 1 : 0) + (right ? 1 : 0); }
  int total_degree() const noexcept { return start.p + start.q; }
  bool is_dot() const noexcept { return generators == 1 && !left && !right; }
  bool is_odd() const noexcept { return length() % 2 == 1; }

  // "dot", "even-I" (right arrow only), "even-II" (left arrow only),
  // "odd-M" (no outer arrows), "odd-L" (both outer arrows).
  std::string type() const {
    if (is_dot()) return "dot";
    if (left && right) return "odd-L";
    if (!left && !right) return "odd-M";
    return right ? "even-I" : "even-II";
  }

  // Position of c_i, i = 0..generators.
  Bidegree image_at(int i) const noexcept { return {start.p + i, start.q + 1 - i}; }

  friend bool operator==(const ZigzagShape&, const ZigzagShape&) = default;
};

using Shape = std::variant<Square, ZigzagShape>;

// Occupied bidegrees; every shape has at most one basis vector per bidegree.
inline std::vector<Bidegree> support(const Shape& s) {
  std::vector<Bidegree> out;
  if (const auto* sq = std::get_if<Square>(&s)) {
    const auto [p, q] = sq->at;
    out = {{p, q}, {p, q + 1}, {p + 1, q}, {p + 1, q + 1}};
  } else {
    const auto& z = std::get<ZigzagShape>(s);
    for (const auto& b : z.generator_bidegrees()) out.push_back(b);
    for (int i = 0; i <= z.generators; ++i) {
      if (i == 0 && !z.left) continue;
      if (i == z.generators && !z.right) continue;
      out.push_back(z.image_at(i));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t shape_dim(const Shape& s) { return support(s).size(); }

inline bool fits(const Shape& s, Grid g) {
  for (const auto& b : support(s))
    if (!g.contains(b.p, b.q)) return false;
  return true;
}

inline Grid minimal_grid(const Shape& s) {
  Grid g{0, 0};
  for (const auto& b : support(s)) {
    g.P = std::max(g.P, b.p + 1);
    g.Q = std::max(g.Q, b.q + 1);
  }
  return g;
}

inline std::string describe(const Shape& s) {
  if (const auto* sq = std::get_if<Square>(&s)) return "square@(" + to_string(sq->at) + ")";
  const auto& z = std::get<ZigzagShape>(s);
  if (z.is_dot()) return "dot@(" + to_string(z.start) + ")";
  return "zigzag[" + z.type() + ",len=" + std::to_string(z.length()) + "]@(" + to_string(z.start) + ")";
}

inline bool shape_less(const Shape& a, const Shape& b) { return support(a) < support(b); }

inline bool operator==(const Shape& a, const Shape& b) {
  if (a.index() != b.index()) return false;
  if (a.index() == 0) return std::get<Square>(a) == std::get<Square>(b);
  return std::get<ZigzagShape>(a) == std::get<ZigzagShape>(b);
}

namespace detail {
inline DoubleComplex unit_complex(const std::vector<Bidegree>& supp, Grid g) {
  std::map<Bidegree, std::size_t> dims;
  for (const auto& b : supp) dims[b] = 1;
  return DoubleComplex(g, dims);
}
inline Matrix scalar(long v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return m;
}
}  // namespace detail

// An empty grid means the smallest grid holding the shape.
inline DoubleComplex build_square(int p, int q, Grid grid = {}) {
  Shape s = Square{{p, q}};
  if (p < 0 || q < 0) throw InvalidInput("square position must be nonnegative");
  if (grid.P == 0 && grid.Q == 0) grid = minimal_grid(s);
  if (!fits(s, grid)) throw InvalidInput("square at (" + to_string(Bidegree{p, q}) + ") does not fit the grid");
  DoubleComplex c = detail::unit_complex(support(s), grid);
  // a -> b = d1 a, a -> c = d2 a, d1 c = e, d2 b = -e
  c.set_d1(p, q, detail::scalar(1));
  c.set_d2(p, q, detail::scalar(1));
  c.set_d1(p, q + 1, detail::scalar(1));
  c.set_d2(p + 1, q, detail::scalar(-1));
  c.set_name(describe(s));
  return c;
}

inline DoubleComplex build_zigzag(const ZigzagShape& z, Grid grid = {}) {
  if (z.generators < 1) throw InvalidInput("zigzag needs at least one generator");
  Shape s = z;
  for (const auto& b : support(s))
    if (b.p < 0 || b.q < 0) throw InvalidInput("zigzag leaves the first quadrant at (" + to_string(b) + ")");
  if (grid.P == 0 && grid.Q == 0) grid = minimal_grid(s);
  if (!fits(s, grid)) throw InvalidInput(describe(s) + " does not fit the grid");
  DoubleComplex c = detail::unit_complex(support(s), grid);
  const auto gens = z.generator_bidegrees();
  for (int i = 0; i < z.generators; ++i) {
    const Bidegree a = gens[static_cast<std::size_t>(i)];
    if (i > 0 || z.left) c.set_d2(a.p, a.q, detail::scalar(1));
    if (i + 1 < z.generators || z.right) c.set_d1(a.p, a.q, detail::scalar(1));
  }
  c.set_name(describe(s));
  return c;
}

inline DoubleComplex build_shape(const Shape& s, Grid grid = {}) {
  if (const auto* sq = std::get_if<Square>(&s)) return build_square(sq->at.p, sq->at.q, grid);
  return build_zigzag(std::get<ZigzagShape>(s), grid);
}

// Every square and zigzag fitting the grid, ordered by support.
inline std::vector<Shape> enumerate_shapes(Grid g) {
  std::vector<Shape> out;
  for (int p = 0; p + 1 < g.P; ++p)
    for (int q = 0; q + 1 < g.Q; ++q) out.push_back(Square{{p, q}});
  for (int p = 0; p < g.P; ++p)
    for (int q = 0; q < g.Q; ++q)
      for (int l = 1; p + l - 1 < g.P && q - l + 1 >= 0; ++l)
        for (int lf = 0; lf < 2; ++lf)
          for (int rt = 0; rt < 2; ++rt) {
            ZigzagShape z{{p, q}, l, lf == 1, rt == 1};
            if (fits(z, g)) out.push_back(z);
          }
  std::sort(out.begin(), out.end(), shape_less);
  return out;
}

}  // namespace ddbar
