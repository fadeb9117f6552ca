#pragma once

// Independent reference computations for the tests.  Nothing here calls the
// library's elimination, subspace or tower code: plain row reduction on
// vectors of rationals, minors, and the filtration definition of the pages.

#include <gmpxx.h>

#include <array>
#include <map>
#include <vector>

#include "ddbar/bicomplex.hpp"

namespace oracle {

using Q = mpq_class;
using Mat = std::vector<std::vector<Q>>;  // row-major
using Vec = std::vector<Q>;

inline Mat from(const ddbar::Matrix& m) {
  Mat out(m.rows(), Vec(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline std::size_t cols(const Mat& m, std::size_t fallback = 0) { return m.empty() ? fallback : m[0].size(); }

// Row echelon form by elimination with the largest-index nonzero pivot; returns rank.
inline std::size_t rank(Mat a) {
  std::size_t r = 0;
  const std::size_t R = a.size(), C = cols(a);
  for (std::size_t c = C; c-- > 0 && r < R;) {
    std::size_t piv = R;
    for (std::size_t i = R; i-- > r;)
      if (a[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv == R) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < R; ++i) {
      if (a[i][c] == 0) continue;
      const Q f = a[i][c] / a[r][c];
      for (std::size_t j = 0; j < C; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

// Cofactor expansion along the first row.
inline Q det(const Mat& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  Q s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a[0][j] == 0) continue;
    Mat minor;
    for (std::size_t i = 1; i < n; ++i) {
      Vec row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(row);
    }
    const Q d = det(minor);
    s += (j % 2 == 0 ? 1 : -1) * a[0][j] * d;
  }
  return s;
}

// Largest k with a nonzero k x k minor; exponential, for small matrices only.
inline std::size_t rank_by_minors(const Mat& a) {
  const std::size_t R = a.size(), C = cols(a);
  std::size_t best = 0;
  for (unsigned rows = 1; rows < (1u << R); ++rows)
    for (unsigned cs = 1; cs < (1u << C); ++cs) {
      const int k = __builtin_popcount(rows);
      if (k != __builtin_popcount(cs) || static_cast<std::size_t>(k) <= best) continue;
      Mat m;
      for (std::size_t i = 0; i < R; ++i) {
        if (!(rows >> i & 1)) continue;
        Vec row;
        for (std::size_t j = 0; j < C; ++j)
          if (cs >> j & 1) row.push_back(a[i][j]);
        m.push_back(row);
      }
      if (det(m) != 0) best = static_cast<std::size_t>(k);
    }
  return best;
}

// Null space basis (as a list of vectors) by reduced row echelon form.
inline std::vector<Vec> nullspace(Mat a, std::size_t ncols) {
  const std::size_t R = a.size();
  std::vector<std::size_t> pivcol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < R; ++c) {
    std::size_t piv = r;
    while (piv < R && a[piv][c] == 0) ++piv;
    if (piv == R) continue;
    std::swap(a[piv], a[r]);
    const Q inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Q f = a[i][c];
      for (std::size_t j = 0; j < ncols; ++j) a[i][j] -= f * a[r][j];
    }
    pivcol.push_back(c);
    ++r;
  }
  std::vector<bool> is_piv(ncols, false);
  for (auto c : pivcol) is_piv[c] = true;
  std::vector<Vec> out;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    Vec v(ncols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivcol.size(); ++i) v[pivcol[i]] = -a[i][f];
    out.push_back(v);
  }
  return out;
}

// Rank of a family of vectors of length n.
inline std::size_t span_dim(const std::vector<Vec>& vs) {
  if (vs.empty()) return 0;
  return rank(Mat(vs.begin(), vs.end()));
}

inline Vec apply(const Mat& m, const Vec& v) {
  Vec out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

inline Mat product(const Mat& a, const Mat& b, std::size_t inner, std::size_t ncols) {
  Mat out(a.size(), Vec(ncols, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < ncols; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

// ---- the total complex, assembled directly from the components

struct Total {
  // degree -> list of (p, q, index) and the differential to degree + 1
  std::map<int, std::vector<std::array<int, 3>>> basis;
  std::map<int, Mat> D;
};

inline Total total(const ddbar::DoubleComplex& c) {
  Total t;
  const auto g = c.grid();
  const int top = g.P + g.Q - 2;
  for (int k = -1; k <= top + 1; ++k) t.basis[k];
  for (int p = 0; p < g.P; ++p)
    for (int q = 0; q < g.Q; ++q)
      for (std::size_t i = 0; i < c.dim(p, q); ++i) t.basis[p + q].push_back({p, q, static_cast<int>(i)});
  for (int k = -1; k <= top; ++k) {
    const auto& src = t.basis[k];
    const auto& tgt = t.basis[k + 1];
    Mat m(tgt.size(), Vec(src.size(), 0));
    for (std::size_t j = 0; j < src.size(); ++j) {
      const auto [p, q, a] = src[j];
      for (std::size_t i = 0; i < tgt.size(); ++i) {
        const auto [pp, qq, b] = tgt[i];
        if (pp == p + 1 && qq == q) m[i][j] += c.d1(p, q)(b, a);
        if (pp == p && qq == q + 1) m[i][j] += c.d2(p, q)(b, a);
      }
    }
    t.D[k] = m;
  }
  return t;
}

inline std::vector<std::size_t> betti(const ddbar::DoubleComplex& c) {
  const Total t = total(c);
  const auto g = c.grid();
  std::vector<std::size_t> out;
  for (int k = 0; k <= g.P + g.Q - 2; ++k) {
    const std::size_t n = t.basis.at(k).size();
    const std::size_t rk_out = rank(t.D.at(k)), rk_in = rank(t.D.at(k - 1));
    out.push_back(n - rk_out - rk_in);
  }
  return out;
}

// Z_r^p in degree k: x supported in columns >= p with Dx supported in columns >= p + r.
inline std::vector<Vec> filtration_z(const Total& t, int r, int p, int k) {
  const auto& src = t.basis.at(k);
  const auto& tgt = t.basis.at(k + 1);
  const Mat& D = t.D.at(k);
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < src.size(); ++j)
    if (src[j][0] >= p) keep.push_back(j);
  Mat m;
  for (std::size_t i = 0; i < tgt.size(); ++i) {
    if (tgt[i][0] >= p + r) continue;
    Vec row;
    for (auto j : keep) row.push_back(D[i][j]);
    m.push_back(row);
  }
  std::vector<Vec> out;
  for (const auto& v : nullspace(m, keep.size())) {
    Vec full(src.size(), 0);
    for (std::size_t a = 0; a < keep.size(); ++a) full[keep[a]] = v[a];
    out.push_back(full);
  }
  return out;
}

// e_r^{p,q} = dim Z_r^p - dim(Z_{r-1}^{p+1} + D Z_{r-1}^{p-r+1}) in degree p+q.
inline std::size_t page_dim(const Total& t, int r, int p, int q) {
  const int k = p + q;
  const std::size_t z = filtration_z(t, r, p, k).size();
  std::vector<Vec> b = filtration_z(t, r - 1, p + 1, k);
  for (const auto& y : filtration_z(t, r - 1, p - r + 1, k - 1)) b.push_back(apply(t.D.at(k - 1), y));
  return z - span_dim(b);
}

// ---- classical Bott-Chern and Aeppli dimensions from the component maps

inline std::size_t bott_chern(const ddbar::DoubleComplex& c, int p, int q) {
  const std::size_t n = c.dim(p, q);
  if (n == 0) return 0;
  Mat stacked = from(c.d1(p, q));
  for (const auto& row : from(c.d2(p, q))) stacked.push_back(row);
  const std::size_t closed = n - rank(stacked);
  // Im(d1 d2) from (p-1, q-1)
  const std::size_t exact = rank(from(c.d1(p - 1, q) * c.d2(p - 1, q - 1)));
  return closed - exact;
}

inline std::size_t aeppli(const ddbar::DoubleComplex& c, int p, int q) {
  const std::size_t n = c.dim(p, q);
  if (n == 0) return 0;
  const std::size_t closed = n - rank(from(c.d1(p, q + 1) * c.d2(p, q)));
  Mat gens;  // columns of d1(p-1,q) and d2(p,q-1) as rows
  const Mat a = from(c.d1(p - 1, q)), b = from(c.d2(p, q - 1));
  for (std::size_t j = 0; j < cols(a); ++j) {
    Vec v;
    for (const auto& row : a) v.push_back(row[j]);
    gens.push_back(v);
  }
  for (std::size_t j = 0; j < cols(b); ++j) {
    Vec v;
    for (const auto& row : b) v.push_back(row[j]);
    gens.push_back(v);
  }
  return closed - (gens.empty() ? 0 : rank(gens));
}

}  // namespace oracle
