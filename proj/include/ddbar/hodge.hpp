#pragma once

// Finite-dimensional Hodge theory over Q: adjoints for a declared inner
// product, harmonic spaces H_r, the operators D_{r-1} and d_r^(w), the
// pseudo-Laplacians, 3-space decompositions and BC/A harmonic spaces.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ddbar/bca.hpp"

namespace ddbar {

// Per-bidegree Gram matrices; a missing bidegree means the identity.
class InnerProduct {
 public:
  InnerProduct() = default;
  explicit InnerProduct(std::map<Bidegree, Matrix> grams) : grams_(std::move(grams)) {}

  Matrix gram(Bidegree b, std::size_t n) const {
    auto it = grams_.find(b);
    if (it == grams_.end()) return Matrix::identity(n);
    if (it->second.rows() != n || it->second.cols() != n)
      throw DimensionMismatch("Gram matrix at (" + to_string(b) + ") does not match the component dimension");
    return it->second;
  }
  const std::map<Bidegree, Matrix>& grams() const noexcept { return grams_; }
  bool is_identity() const noexcept { return grams_.empty(); }

  Rational dot(Bidegree b, const Vector& x, const Vector& y) const {
    const Matrix g = gram(b, x.size());
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < y.size(); ++j)
        if (sgn(x[i]) != 0 && sgn(y[j]) != 0) s += x[i] * g(i, j) * y[j];
    return s;
  }

 private:
  std::map<Bidegree, Matrix> grams_;
};

// Symmetric with positive leading pivots (no pivoting needed for SPD).
inline bool is_positive_definite(const Matrix& g) {
  if (g.rows() != g.cols()) return false;
  const std::size_t n = g.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (g(i, j) != g(j, i)) return false;
  Matrix a = g;
  for (std::size_t k = 0; k < n; ++k) {
    if (sgn(a(k, k)) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(a(i, k)) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return true;
}

inline void validate_inner_product(const DoubleComplex& c, const InnerProduct& ip) {
  for (const auto& [b, g] : ip.grams()) {
    if (!c.grid().contains(b.p, b.q)) throw InvalidInput("Gram matrix given outside the grid at (" + to_string(b) + ")");
    if (g.rows() != c.dim(b) || g.cols() != c.dim(b))
      throw DimensionMismatch("Gram matrix at (" + to_string(b) + ") does not match the component dimension");
    if (!is_positive_definite(g)) throw InvalidInput("Gram matrix at (" + to_string(b) + ") is not symmetric positive definite");
  }
}

// G_src^-1 m^T G_dst: the adjoint of m : src -> dst.
inline Matrix adjoint(const Matrix& m, const Matrix& g_src, const Matrix& g_dst) {
  if (g_src.rows() != m.cols() || g_dst.rows() != m.rows()) throw DimensionMismatch("adjoint: Gram shapes");
  return inverse(g_src) * m.transpose() * g_dst;
}

inline Bidegree reflect(const Grid& g, Bidegree b) { return {g.P - 1 - b.p, g.Q - 1 - b.q}; }

// The complex of adjoints on the reflected grid: component (p,q) sits at
// (P-1-p, Q-1-q), with delta1 = d1^* and delta2 = d2^*.  Star towers are
// ordinary towers here.
inline DoubleComplex adjoint_complex(const DoubleComplex& c, const InnerProduct& ip) {
  const Grid& g = c.grid();
  std::map<Bidegree, std::size_t> dims;
  for (const auto& b : c.bidegrees()) dims[reflect(g, b)] = c.dim(b);
  DoubleComplex adj(g, dims);
  for (const auto& b : c.bidegrees()) {
    const auto [p, q] = b;
    const Bidegree rb = reflect(g, b);
    const Matrix gb = ip.gram(b, c.dim(b));
    if (g.contains(p - 1, q))
      adj.set_d1(rb.p, rb.q, adjoint(c.d1(p - 1, q), ip.gram({p - 1, q}, c.dim(p - 1, q)), gb));
    if (g.contains(p, q - 1))
      adj.set_d2(rb.p, rb.q, adjoint(c.d2(p, q - 1), ip.gram({p, q - 1}, c.dim(p, q - 1)), gb));
  }
  adj.set_name(c.name() + "*");
  return adj;
}

// Orthogonal projection onto s: B (B^T G B)^-1 B^T G.
inline Matrix orthogonal_projection(const Subspace& s, const Matrix& g) {
  const std::size_t n = s.ambient_dim();
  if (s.is_zero()) return Matrix(n, n);
  const Matrix& b = s.basis();
  return b * inverse(b.transpose() * g * b) * b.transpose() * g;
}

inline bool orthogonal(const Subspace& a, const Subspace& b, const Matrix& g) {
  if (a.is_zero() || b.is_zero()) return true;
  return (a.basis().transpose() * g * b.basis()).is_zero();
}

// Zero on ker L, the inverse of L on the orthogonal complement.  L must be
// self-adjoint for g.
inline Matrix green_inverse(const Matrix& l, const Matrix& g) {
  const std::size_t n = l.rows();
  const Matrix proj = orthogonal_projection(kernel_basis(l), g);
  const Matrix perp = Matrix::identity(n) - proj;
  Matrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector y = perp.column(j);
    auto x = solve(l, y);
    if (!x) throw ConsistencyError("green_inverse: operator is not self-adjoint for the inner product");
    out.set_column(j, perp * *x);
  }
  return out;
}

struct HarmonicTower {
  int r_max = 0;
  std::vector<std::map<Bidegree, Subspace>> H;         // H[r-1]
  std::vector<std::map<Bidegree, Matrix>> projection;  // p_r
  std::vector<std::map<Bidegree, Matrix>> D;           // D[r-1] = D_{r-1}: (p,q) -> (p+r-1, q-r+1)
  std::vector<std::map<Bidegree, Matrix>> dr;          // d_r^(w): (p,q) -> (p+r, q-r+1)
  std::vector<std::map<Bidegree, Matrix>> laplacian;   // Laplacian r, bidegree preserving
  bool laplacian_kernels_agree = true;                 // ker Laplacian r == H_r everywhere
  bool d_operator_valid = true;  // D_{r-1} alpha ends an E_r tower for every harmonic alpha

  const Subspace& h(int r, Bidegree b) const { return H[static_cast<std::size_t>(r - 1)].at(b); }
};

namespace detail {

struct HodgeData {
  const DoubleComplex& c;
  const InnerProduct& ip;
  std::map<Bidegree, Matrix> gram;

  HodgeData(const DoubleComplex& cc, const InnerProduct& i) : c(cc), ip(i) {
    for (const auto& b : c.bidegrees()) gram[b] = ip.gram(b, c.dim(b));
  }
  Matrix g(Bidegree b) const {
    auto it = gram.find(b);
    return it == gram.end() ? Matrix(0, 0) : it->second;
  }
  Matrix adj(const Matrix& m, Bidegree src, Bidegree dst) const { return adjoint(m, g(src), g(dst)); }
  // d1^*: (p+1,q) -> (p,q), d2^*: (p,q+1) -> (p,q)
  Matrix d1s(int p, int q) const { return adj(c.d1(p, q), {p, q}, {p + 1, q}); }
  Matrix d2s(int p, int q) const { return adj(c.d2(p, q), {p, q}, {p, q + 1}); }
};

inline Matrix lookup(const std::map<Bidegree, Matrix>& m, Bidegree b, std::size_t rows, std::size_t cols) {
  auto it = m.find(b);
  return it == m.end() ? Matrix(rows, cols) : it->second;
}

}  // namespace detail

// Whether some solution u_1..u_{r-1} of the E_r tower for alpha has u_{r-1} = last.
inline bool tower_ends_with(const DoubleComplex& c, int r, int p, int q, const Vector& alpha, const Vector& last) {
  auto ts = solve_tower_for(c, r, p, q, alpha);
  if (!ts) return false;
  const std::size_t k = ts->block_dims.size() - 1;
  std::size_t off = 0;
  for (std::size_t i = 0; i < k; ++i) off += ts->block_dims[i];
  const std::size_t n = ts->block_dims[k];
  const Matrix& h = ts->homogeneous.basis();
  Matrix lastblock = h.block(off, 0, n, h.cols());
  Vector diff = last;
  const Vector part = *ts->block(ts->particular, k);
  for (std::size_t i = 0; i < n; ++i) diff[i] -= part[i];
  return Subspace::span(lastblock).contains(diff);
}

inline HarmonicTower harmonic_tower(const DoubleComplex& c, const InnerProduct& ip, int r_max) {
  ensure_valid(c);
  validate_inner_product(c, ip);
  if (r_max < 1) throw InvalidInput("harmonic_tower: r_max must be at least 1");
  const detail::HodgeData hd(c, ip);
  const auto bidegrees = c.bidegrees();
  auto dim = [&](int p, int q) { return c.dim(p, q); };
  HarmonicTower t;
  t.r_max = r_max;
  t.H.resize(static_cast<std::size_t>(r_max));
  t.projection.resize(static_cast<std::size_t>(r_max));
  t.D.resize(static_cast<std::size_t>(r_max));
  t.dr.resize(static_cast<std::size_t>(r_max));
  t.laplacian.resize(static_cast<std::size_t>(r_max));
  std::vector<std::map<Bidegree, Matrix>> green(static_cast<std::size_t>(r_max));

  // Stage 1: the d2-Laplacian.
  for (const auto& [p, q] : bidegrees) {
    const Matrix l = c.d2(p, q - 1) * hd.d2s(p, q - 1) + hd.d2s(p, q) * c.d2(p, q);
    t.laplacian[0][{p, q}] = l;
    t.H[0][{p, q}] = kernel_basis(l);
    t.projection[0][{p, q}] = orthogonal_projection(t.H[0][{p, q}], hd.g({p, q}));
    t.D[0][{p, q}] = Matrix::identity(dim(p, q));
  }

  for (int r = 1; r <= r_max; ++r) {
    const auto ri = static_cast<std::size_t>(r - 1);
    auto proj = [&](int p, int q) { return detail::lookup(t.projection[ri], {p, q}, dim(p, q), dim(p, q)); };
    auto dop = [&](int p, int q) {
      return detail::lookup(t.D[ri], {p, q}, dim(p + r - 1, q - r + 1), dim(p, q));
    };
    for (const auto& [p, q] : bidegrees) green[ri][{p, q}] = green_inverse(t.laplacian[ri][{p, q}], hd.g({p, q}));

    // d_r^(w) = p_r d1 D_{r-1} p_r
    for (const auto& [p, q] : bidegrees)
      t.dr[ri][{p, q}] = proj(p + r, q - r + 1) * c.d1(p + r - 1, q - r + 1) * dop(p, q) * proj(p, q);

    // D_{r-1} alpha has to be the last entry u_{r-1} of some solution of the E_r tower.
    if (r >= 2)
      for (const auto& [p, q] : bidegrees) {
        const Subspace& hr = t.H[ri][{p, q}];
        for (std::size_t j = 0; j < hr.dim() && t.d_operator_valid; ++j) {
          const Vector alpha = hr.basis().column(j);
          if (!tower_ends_with(c, r, p, q, alpha, dop(p, q) * alpha)) t.d_operator_valid = false;
        }
      }

    if (r == r_max) break;
    const auto ni = static_cast<std::size_t>(r);
    // H_{r+1} = H_r ∩ ker d_r ∩ ker d_r^*, and the next Laplacian.
    for (const auto& [p, q] : bidegrees) {
      const Bidegree b{p, q};
      const Bidegree src{p - r, q + r - 1}, tgt{p + r, q - r + 1};
      const Matrix out = t.dr[ri][b];
      const Matrix in = c.grid().contains(src.p, src.q) ? t.dr[ri][src] : Matrix(dim(p, q), 0);
      const Matrix in_adj = c.grid().contains(src.p, src.q) ? hd.adj(in, src, b) : Matrix(0, dim(p, q));
      Subspace h = subspace_intersection(t.H[ri][b], kernel_basis(vstack(out, in_adj)));
      t.H[ni][b] = h;
      t.projection[ni][b] = orthogonal_projection(h, hd.g(b));

      // (d1 D_{r-1} p_r)(...)^* + (p_r d1 D_{r-1})^*(...) + previous Laplacian
      Matrix lap = t.laplacian[ri][b];
      if (c.grid().contains(src.p, src.q)) {
        const Matrix a = c.d1(p - 1, q) * dop(src.p, src.q) * proj(src.p, src.q);
        lap = lap + a * hd.adj(a, src, b);
      }
      if (c.grid().contains(tgt.p, tgt.q)) {
        const Matrix bm = proj(tgt.p, tgt.q) * c.d1(p + r - 1, q - r + 1) * dop(p, q);
        lap = lap + hd.adj(bm, b, tgt) * bm;
      }
      t.laplacian[ni][b] = lap;
    }
    for (const auto& b : bidegrees)
      if (!(kernel_basis(t.laplacian[ni][b]) == t.H[ni][b])) t.laplacian_kernels_agree = false;
    // D_r(p,q) = D_{r-1}(p+1,q-1) G_r(p+1,q-1) d2^* d1, one more factor on the right.
    green[ni].clear();
    for (const auto& [p, q] : bidegrees) {
      const Bidegree mid{p + 1, q - 1};
      Matrix step(dim(mid.p, mid.q), dim(p, q));
      if (c.grid().contains(mid.p, mid.q))
        step = green[ri][mid] * hd.d2s(mid.p, mid.q) * c.d1(p, q);
      Matrix prev = c.grid().contains(mid.p, mid.q) ? dop(mid.p, mid.q) : Matrix(dim(p + r, q - r), 0);
      t.D[ni][{p, q}] = prev * step;
    }
  }
  return t;
}

struct ThreeSpaceDecomposition {
  Subspace harmonic, exact, coexact;
  bool orthogonal = true;
  bool dims_sum = true;
  bool exact_is_cr = true;
  bool coexact_is_star = true;
  bool z_split = true;  // Z_r = H_r ⊕ C_r
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Exact part: Im d2 + sum_i Im(d1 D_{i-1} p_i), i < r; coexact part: the
// adjoint expression.  Both are compared with the tower spaces.
inline ThreeSpaceDecomposition three_space_decomposition(const DoubleComplex& c, const InnerProduct& ip,
                                                         const HarmonicTower& t, int r, int p, int q) {
  if (r < 1 || r > t.r_max) throw InvalidInput("three_space_decomposition: r outside the computed tower");
  const detail::HodgeData hd(c, ip);
  const Bidegree b{p, q};
  const std::size_t n = c.dim(b);
  const Matrix g = hd.g(b);
  ThreeSpaceDecomposition d;
  d.harmonic = t.h(r, b);
  d.exact = image_basis(c.d2(p, q - 1));
  d.coexact = c.grid().contains(p, q + 1) ? image_basis(hd.d2s(p, q)) : Subspace(n);
  for (int i = 1; i < r; ++i) {
    const auto ii = static_cast<std::size_t>(i - 1);
    const Bidegree src{p - i, q + i - 1}, tgt{p + i, q - i + 1};
    if (c.grid().contains(src.p, src.q)) {
      const Matrix a = c.d1(p - 1, q) * t.D[ii].at(src) * t.projection[ii].at(src);
      d.exact = subspace_sum(d.exact, image_basis(a));
    }
    if (c.grid().contains(tgt.p, tgt.q)) {
      const Matrix bm = t.projection[ii].at(tgt) * c.d1(p + i - 1, q - i + 1) * t.D[ii].at(b);
      d.coexact = subspace_sum(d.coexact, image_basis(hd.adj(bm, b, tgt)));
    }
  }
  const std::string where = " at (" + to_string(b) + ") r=" + std::to_string(r);
  if (!orthogonal(d.harmonic, d.exact, g) || !orthogonal(d.harmonic, d.coexact, g) ||
      !orthogonal(d.exact, d.coexact, g)) {
    d.orthogonal = false;
    d.failures.push_back("components not orthogonal" + where);
  }
  if (d.harmonic.dim() + d.exact.dim() + d.coexact.dim() != n) {
    d.dims_sum = false;
    d.failures.push_back("dimensions do not add up" + where);
  }
  if (!(d.exact == detail::c_space(c, r, p, q))) {
    d.exact_is_cr = false;
    d.failures.push_back("exact part differs from C_r" + where);
  }
  const DoubleComplex adj = adjoint_complex(c, ip);
  const Bidegree rb = reflect(c.grid(), b);
  if (!(d.coexact == detail::c_space(adj, r, rb.p, rb.q))) {
    d.coexact_is_star = false;
    d.failures.push_back("coexact part differs from the adjoint C_r" + where);
  }
  const Subspace z = detail::z_space(c, r, p, q);
  if (!(subspace_sum(d.harmonic, d.exact) == z) || subspace_intersection(d.harmonic, d.exact).dim() != 0) {
    d.z_split = false;
    d.failures.push_back("Z_r is not H_r ⊕ C_r" + where);
  }
  return d;
}

// Towers over the adjoint maps; kind and r as in tower_space.
inline Subspace star_tower_space(const DoubleComplex& c, const InnerProduct& ip, TowerKind kind, int r_or_s, int p,
                                 int q) {
  validate_inner_product(c, ip);
  const Bidegree rb = reflect(c.grid(), {p, q});
  return tower_space(adjoint_complex(c, ip), kind, r_or_s, rb.p, rb.q);
}

// E_r^* Ebar_r^*-closed elements.
inline Subspace star_ererbar_closed_space(const DoubleComplex& c, const InnerProduct& ip, int r, int p, int q) {
  validate_inner_product(c, ip);
  const Bidegree rb = reflect(c.grid(), {p, q});
  return ererbar_closed_space(adjoint_complex(c, ip), r, rb.p, rb.q);
}

struct BcaHarmonic {
  Subspace bc, a;
  bool dims_match = true;
};

inline BcaHarmonic bc_a_harmonic_spaces(const DoubleComplex& c, const InnerProduct& ip, int r, int p, int q) {
  ensure_valid(c);
  validate_inner_product(c, ip);
  const DoubleComplex adj = adjoint_complex(c, ip);
  const DoubleComplex sw = swapped(c), swadj = swapped(adj);
  const Bidegree rb = reflect(c.grid(), {p, q});
  BcaHarmonic h;
  h.bc = subspace_intersection(closed_space(c, p, q), detail::ererbar_closed(adj, swadj, r, rb.p, rb.q));
  h.a = subspace_intersection(detail::ererbar_closed(c, sw, r, p, q), closed_space(adj, rb.p, rb.q));
  const std::size_t ebc = quotient_dim(closed_space(c, p, q), detail::ererbar_exact(c, sw, r, p, q));
  const std::size_t ea = quotient_dim(detail::ererbar_closed(c, sw, r, p, q), sum_of_images(c, p, q));
  h.dims_match = h.bc.dim() == ebc && h.a.dim() == ea;
  if (!h.dims_match)
    throw DimensionMismatch("harmonic BC/A dimension differs from the cohomology at (" + to_string(Bidegree{p, q}) +
                            ") r=" + std::to_string(r));
  return h;
}

}  // namespace ddbar
