#pragma once

// Frolicher spectral sequence of the column filtration.  E_r-closed and
// E_r-exact spaces come from finite towers of linear equations; pages are
// Z_r / C_r.

#include <string>
#include <vector>

#include "ddbar/bicomplex.hpp"
#include "ddbar/parallel.hpp"

namespace ddbar {

enum class TowerKind {
  ErClosed,            // Z_r
  ErExact,             // C_r
  EbarClosed,          // Z_r with d1, d2 exchanged
  EbarExact,           // C_r with d1, d2 exchanged
  ReachesZero,         // E_{dbar,s}: dbar(zeta) reaches 0 in at most s steps
  ReachesZeroSwapped,  // E_{del,s}
  Runs,                // F_{del,s}: del(alpha) runs at least s times
  RunsSwapped,         // F_{dbar,s}
};

// Per-bidegree table of counts on a grid.
struct DimGrid {
  Grid grid;
  std::vector<std::size_t> values;

  DimGrid() = default;
  explicit DimGrid(Grid g) : grid(g), values(static_cast<std::size_t>(g.P * g.Q), 0) {}

  std::size_t& at(int p, int q) { return values[static_cast<std::size_t>(p * grid.Q + q)]; }
  std::size_t at(int p, int q) const {
    return grid.contains(p, q) ? values[static_cast<std::size_t>(p * grid.Q + q)] : 0;
  }
  std::size_t total() const {
    std::size_t s = 0;
    for (auto v : values) s += v;
    return s;
  }
  // Sum over p+q = k.
  std::size_t antidiagonal(int k) const {
    std::size_t s = 0;
    for (int p = 0; p < grid.P; ++p)
      if (k - p >= 0 && k - p < grid.Q) s += at(p, k - p);
    return s;
  }
  friend bool operator==(const DimGrid&, const DimGrid&) = default;
};

inline int default_rmax(const DoubleComplex& c) { return c.grid().diameter() + 1; }

namespace detail {

// alpha at (p,q), u_i at (p+i, q-i):  d2 alpha = 0, d1 alpha = d2 u_1,
// d1 u_i = d2 u_{i+1}.
inline TowerSystem z_system(const DoubleComplex& c, int r, int p, int q) {
  TowerSystem sys;
  sys.block_dims.push_back(c.dim(p, q));
  for (int i = 1; i < r; ++i) sys.block_dims.push_back(c.dim(p + i, q - i));
  sys.stages.push_back({{{0, c.d2(p, q)}}});
  if (r >= 2) sys.stages.push_back({{{0, c.d1(p, q)}, {1, -c.d2(p + 1, q - 1)}}});
  for (int i = 1; i <= r - 2; ++i)
    sys.stages.push_back({{{static_cast<std::size_t>(i), c.d1(p + i, q - i)},
                           {static_cast<std::size_t>(i + 1), -c.d2(p + i + 1, q - i - 1)}}});
  return sys;
}

inline Subspace z_space(const DoubleComplex& c, int r, int p, int q) {
  if (c.dim(p, q) == 0) return Subspace(c.dim(p, q));
  if (r == 1) return kernel_basis(c.d2(p, q));
  return solve_tower(z_system(c, r, p, q), 0);
}

// zeta at (p,q), w_t at (p-t, q+t): d2 zeta = d1 w_1, d2 w_t = d1 w_{t+1},
// d2 w_{s-1} = 0.
inline Subspace reaches_zero(const DoubleComplex& c, int s, int p, int q) {
  const std::size_t n = c.dim(p, q);
  if (s <= 0 || n == 0) return Subspace(n);
  if (s == 1) return kernel_basis(c.d2(p, q));
  TowerSystem sys;
  sys.block_dims.push_back(n);
  for (int t = 1; t < s; ++t) sys.block_dims.push_back(c.dim(p - t, q + t));
  sys.stages.push_back({{{0, c.d2(p, q)}, {1, -c.d1(p - 1, q + 1)}}});
  for (int t = 1; t <= s - 2; ++t)
    sys.stages.push_back({{{static_cast<std::size_t>(t), c.d2(p - t, q + t)},
                           {static_cast<std::size_t>(t + 1), -c.d1(p - t - 1, q + t + 1)}}});
  sys.stages.push_back({{{static_cast<std::size_t>(s - 1), c.d2(p - s + 1, q + s - 1)}}});
  return solve_tower(sys, 0);
}

// Im d2 + d1(E_{dbar,r-1} at (p-1,q))
inline Subspace c_space(const DoubleComplex& c, int r, int p, int q) {
  const std::size_t n = c.dim(p, q);
  if (n == 0) return Subspace(n);
  Subspace im = image_basis(c.d2(p, q - 1));
  if (r <= 1) return im;
  Subspace e = reaches_zero(c, r - 1, p - 1, q);
  if (e.is_zero()) return im;
  return subspace_sum(im, image_of(c.d1(p - 1, q), e));
}

// alpha at (p,q), eta_i at (p+i, q-i): d1 alpha = d2 eta_1, d1 eta_i = d2 eta_{i+1}.
inline Subspace runs(const DoubleComplex& c, int s, int p, int q) {
  const std::size_t n = c.dim(p, q);
  if (s <= 0 || n == 0) return Subspace::full(n);
  TowerSystem sys;
  sys.block_dims.push_back(n);
  for (int i = 1; i <= s; ++i) sys.block_dims.push_back(c.dim(p + i, q - i));
  sys.stages.push_back({{{0, c.d1(p, q)}, {1, -c.d2(p + 1, q - 1)}}});
  for (int i = 1; i <= s - 1; ++i)
    sys.stages.push_back({{{static_cast<std::size_t>(i), c.d1(p + i, q - i)},
                           {static_cast<std::size_t>(i + 1), -c.d2(p + i + 1, q - i - 1)}}});
  return solve_tower(sys, 0);
}

inline Subspace tower_space_impl(const DoubleComplex& c, const DoubleComplex& sw, TowerKind kind, int r, int p,
                                 int q) {
  switch (kind) {
    case TowerKind::ErClosed: return z_space(c, r, p, q);
    case TowerKind::ErExact: return c_space(c, r, p, q);
    case TowerKind::EbarClosed: return z_space(sw, r, q, p);
    case TowerKind::EbarExact: return c_space(sw, r, q, p);
    case TowerKind::ReachesZero: return reaches_zero(c, r, p, q);
    case TowerKind::ReachesZeroSwapped: return reaches_zero(sw, r, q, p);
    case TowerKind::Runs: return runs(c, r, p, q);
    case TowerKind::RunsSwapped: return runs(sw, r, q, p);
  }
  return Subspace(c.dim(p, q));
}

}  // namespace detail

inline bool is_page_kind(TowerKind k) {
  return k == TowerKind::ErClosed || k == TowerKind::ErExact || k == TowerKind::EbarClosed ||
         k == TowerKind::EbarExact;
}

// r for the page kinds (r >= 1), s for the E/F kinds (s >= 0).
inline Subspace tower_space(const DoubleComplex& c, TowerKind kind, int r_or_s, int p, int q) {
  if (is_page_kind(kind) && r_or_s < 1) throw InvalidInput("tower_space: r must be at least 1");
  if (r_or_s < 0) throw InvalidInput("tower_space: s must be nonnegative");
  const bool needs_swap = kind == TowerKind::EbarClosed || kind == TowerKind::EbarExact ||
                          kind == TowerKind::ReachesZeroSwapped || kind == TowerKind::RunsSwapped;
  if (!needs_swap) return detail::tower_space_impl(c, c, kind, r_or_s, p, q);
  const DoubleComplex sw = swapped(c);
  return detail::tower_space_impl(c, sw, kind, r_or_s, p, q);
}

struct PageTable {
  int r_max = 0;
  std::vector<DimGrid> e;     // e[r-1]
  std::vector<DimGrid> ebar;  // empty when not requested

  std::size_t at(int r, int p, int q) const { return e[static_cast<std::size_t>(r - 1)].at(p, q); }
  std::size_t bar_at(int r, int p, int q) const { return ebar[static_cast<std::size_t>(r - 1)].at(p, q); }
};

inline PageTable page_dims(const DoubleComplex& c, int r_max, bool with_bar = true) {
  ensure_valid(c);
  if (r_max < 1) throw InvalidInput("page_dims: r_max must be at least 1");
  const DoubleComplex sw = swapped(c);
  const auto bidegrees = c.bidegrees();
  PageTable t;
  t.r_max = r_max;
  t.e.assign(static_cast<std::size_t>(r_max), DimGrid(c.grid()));
  if (with_bar) t.ebar.assign(static_cast<std::size_t>(r_max), DimGrid(c.grid()));
  parallel_for(bidegrees.size(), [&](std::size_t i) {
    const auto [p, q] = bidegrees[i];
    if (c.dim(p, q) == 0) return;
    for (int r = 1; r <= r_max; ++r) {
      t.e[static_cast<std::size_t>(r - 1)].at(p, q) =
          quotient_dim(detail::z_space(c, r, p, q), detail::c_space(c, r, p, q));
      if (with_bar)
        t.ebar[static_cast<std::size_t>(r - 1)].at(p, q) =
            quotient_dim(detail::z_space(sw, r, q, p), detail::c_space(sw, r, q, p));
    }
  });
  return t;
}

// Basis of E_r^{p,q}: representatives completing C_r inside Z_r.
inline QuotientBasis page_basis(const DoubleComplex& c, int r, int p, int q) {
  return QuotientBasis(detail::z_space(c, r, p, q), detail::c_space(c, r, p, q));
}

// General solution (u_1..u_{r-1} stacked) of the tower with alpha fixed:
// a particular solution and the homogeneous solution space.
struct TowerSolution {
  std::vector<std::size_t> block_dims;
  Vector particular;
  Subspace homogeneous;
  std::optional<Vector> block(const Vector& x, std::size_t i) const {
    std::size_t off = 0;
    for (std::size_t k = 0; k < i; ++k) off += block_dims[k];
    return Vector(x.begin() + static_cast<std::ptrdiff_t>(off),
                  x.begin() + static_cast<std::ptrdiff_t>(off + block_dims[i]));
  }
};

inline std::optional<TowerSolution> solve_tower_for(const DoubleComplex& c, int r, int p, int q, const Vector& alpha) {
  TowerSystem sys = detail::z_system(c, r, p, q);
  Matrix full = sys.assemble();
  const std::size_t n = c.dim(p, q);
  Matrix rest = full.block(0, n, full.rows(), full.cols() - n);
  Vector rhs = full.block(0, 0, full.rows(), n) * alpha;
  for (auto& x : rhs) x = -x;
  auto sol = solve(rest, rhs);
  if (!sol) return std::nullopt;
  TowerSolution ts;
  ts.block_dims.assign(sys.block_dims.begin() + 1, sys.block_dims.end());
  ts.particular = std::move(*sol);
  ts.homogeneous = kernel_basis(rest);
  return ts;
}

// d1 u_{r-1} for the given alpha and tower solution x (x ignored when r = 1).
inline Vector dr_image(const DoubleComplex& c, int r, int p, int q, const Vector& alpha, const TowerSolution* ts,
                       const Vector* x) {
  if (r == 1) return c.d1(p, q) * alpha;
  Vector u = *ts->block(*x, static_cast<std::size_t>(r - 2));
  return c.d1(p + r - 1, q - r + 1) * u;
}

// Matrix of d_r: E_r^{p,q} -> E_r^{p+r, q-r+1} in the page bases.
inline Matrix dr_matrix(const DoubleComplex& c, int r, int p, int q) {
  if (r < 1) throw InvalidInput("dr_matrix: r must be at least 1");
  const QuotientBasis src = page_basis(c, r, p, q);
  const int tp = p + r, tq = q - r + 1;
  const QuotientBasis tgt = page_basis(c, r, tp, tq);
  Matrix m(tgt.dim(), src.dim());
  if (tgt.dim() == 0 || src.dim() == 0) return m;
  for (std::size_t j = 0; j < src.dim(); ++j) {
    const Vector alpha = src.representatives().column(j);
    Vector y;
    if (r == 1) {
      y = dr_image(c, 1, p, q, alpha, nullptr, nullptr);
    } else {
      auto ts = solve_tower_for(c, r, p, q, alpha);
      if (!ts) throw ConsistencyError("tower unsolvable for an E_" + std::to_string(r) + " representative at (" +
                                      to_string(Bidegree{p, q}) + ")");
      y = dr_image(c, r, p, q, alpha, &*ts, &ts->particular);
    }
    m.set_column(j, tgt.coordinates(y));
  }
  return m;
}

// E_1 from ranks of d2, then e_{r+1} = e_r - rank(d_r out) - rank(d_r in).
inline PageTable iterated_pages_oracle(const DoubleComplex& c, int r_max) {
  ensure_valid(c);
  const Grid g = c.grid();
  const auto bidegrees = c.bidegrees();
  PageTable t;
  t.r_max = r_max;
  t.e.assign(static_cast<std::size_t>(r_max), DimGrid(g));
  for (const auto& [p, q] : bidegrees) {
    const std::size_t n = c.dim(p, q);
    if (n == 0) continue;
    t.e[0].at(p, q) = n - rank(c.d2(p, q)) - rank(c.d2(p, q - 1));
  }
  for (int r = 1; r < r_max; ++r) {
    DimGrid out_rank(g);
    parallel_for(bidegrees.size(), [&](std::size_t i) {
      const auto [p, q] = bidegrees[i];
      if (t.e[static_cast<std::size_t>(r - 1)].at(p, q) == 0) return;
      if (!g.contains(p + r, q - r + 1)) return;
      out_rank.at(p, q) = rank(dr_matrix(c, r, p, q));
    });
    for (const auto& [p, q] : bidegrees) {
      std::size_t v = t.e[static_cast<std::size_t>(r - 1)].at(p, q);
      v -= out_rank.at(p, q);
      if (g.contains(p - r, q + r - 1)) v -= out_rank.at(p - r, q + r - 1);
      t.e[static_cast<std::size_t>(r)].at(p, q) = v;
    }
  }
  return t;
}

// Smallest r with d_s = 0 for all s >= r.
inline int degeneration_page(const DoubleComplex& c) {
  const int R = default_rmax(c);
  PageTable t = page_dims(c, R, false);
  int r = R;
  while (r > 1 && t.e[static_cast<std::size_t>(r - 2)] == t.e[static_cast<std::size_t>(R - 1)]) --r;
  // The differentials from page r on must vanish outright.
  for (int s = r; s < R; ++s)
    for (const auto& [p, q] : c.bidegrees())
      if (t.at(s, p, q) > 0 && c.grid().contains(p + s, q - s + 1) && !dr_matrix(c, s, p, q).is_zero())
        throw ConsistencyError("d_" + std::to_string(s) + " nonzero although pages stabilised at " + std::to_string(r));
  return r;
}

struct EinftyReport {
  std::vector<std::size_t> einfty_sums;
  std::vector<std::size_t> betti;
  bool ok = true;
};

inline EinftyReport einfty_check(const DoubleComplex& c) {
  ensure_valid(c);
  const int R = default_rmax(c);
  PageTable t = page_dims(c, R, false);
  EinftyReport rep;
  rep.betti = de_rham_dims(total_complex(c));
  for (std::size_t k = 0; k < rep.betti.size(); ++k) {
    rep.einfty_sums.push_back(t.e[static_cast<std::size_t>(R - 1)].antidiagonal(static_cast<int>(k)));
    if (rep.einfty_sums.back() != rep.betti[k]) rep.ok = false;
  }
  return rep;
}

}  // namespace ddbar
