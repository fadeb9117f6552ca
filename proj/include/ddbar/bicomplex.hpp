#pragma once

// Bounded double complexes over Q: storage, validation, direct sums, basis
// changes, the total complex and its cohomology.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ddbar/linalg.hpp"

namespace ddbar {

struct Bidegree {
  int p = 0;
  int q = 0;
  friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
};

inline std::string to_string(const Bidegree& b) { return std::to_string(b.p) + "," + std::to_string(b.q); }

// Components live at 0 <= p < P, 0 <= q < Q.
struct Grid {
  int P = 0;
  int Q = 0;
  bool contains(int p, int q) const noexcept { return p >= 0 && q >= 0 && p < P && q < Q; }
  int diameter() const noexcept { return P > Q ? P : Q; }
  friend bool operator==(const Grid&, const Grid&) = default;
};

class DoubleComplex {
 public:
  DoubleComplex() = default;

  explicit DoubleComplex(Grid grid) : grid_(grid), dims_(cells(grid), 0) { reset_maps(); }

  DoubleComplex(Grid grid, const std::map<Bidegree, std::size_t>& dims) : grid_(grid), dims_(cells(grid), 0) {
    for (const auto& [b, n] : dims) {
      if (!grid.contains(b.p, b.q)) {
        if (n == 0) continue;
        throw InvalidComplex("dimension given at (" + to_string(b) + ") outside the grid");
      }
      dims_[index(b.p, b.q)] = n;
    }
    reset_maps();
  }

  const Grid& grid() const noexcept { return grid_; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  std::size_t dim(int p, int q) const noexcept { return grid_.contains(p, q) ? dims_[index(p, q)] : 0; }
  std::size_t dim(Bidegree b) const noexcept { return dim(b.p, b.q); }

  std::size_t total_dim() const noexcept {
    std::size_t s = 0;
    for (auto n : dims_) s += n;
    return s;
  }

  // (p,q) -> (p+1,q); the zero map of the right shape anywhere off the grid.
  Matrix d1(int p, int q) const {
    if (!grid_.contains(p, q)) return Matrix(dim(p + 1, q), 0);
    return d1_[index(p, q)];
  }
  // (p,q) -> (p,q+1)
  Matrix d2(int p, int q) const {
    if (!grid_.contains(p, q)) return Matrix(dim(p, q + 1), 0);
    return d2_[index(p, q)];
  }

  const Matrix& d1_ref(int p, int q) const { return d1_[index(p, q)]; }
  const Matrix& d2_ref(int p, int q) const { return d2_[index(p, q)]; }

  void set_d1(int p, int q, Matrix m) { set_map(d1_, p, q, dim(p + 1, q), std::move(m), "d1"); }
  void set_d2(int p, int q, Matrix m) { set_map(d2_, p, q, dim(p, q + 1), std::move(m), "d2"); }

  const std::vector<std::string>& labels(int p, int q) const {
    static const std::vector<std::string> none;
    auto it = labels_.find({p, q});
    return it == labels_.end() ? none : it->second;
  }
  void set_labels(int p, int q, std::vector<std::string> l) {
    if (l.size() != dim(p, q)) throw InvalidComplex("label count does not match dimension at (" + to_string(Bidegree{p, q}) + ")");
    labels_[{p, q}] = std::move(l);
  }
  bool has_labels() const noexcept { return !labels_.empty(); }

  // Truncated models are trustworthy only up to some column.
  std::optional<int> certified_max_p() const noexcept { return certified_max_p_; }
  void set_certified_max_p(std::optional<int> p) { certified_max_p_ = p; }

  std::vector<Bidegree> bidegrees() const {
    std::vector<Bidegree> out;
    for (int p = 0; p < grid_.P; ++p)
      for (int q = 0; q < grid_.Q; ++q) out.push_back({p, q});
    return out;
  }

 private:
  static std::size_t cells(Grid g) { return static_cast<std::size_t>(g.P < 0 ? 0 : g.P) * static_cast<std::size_t>(g.Q < 0 ? 0 : g.Q); }
  std::size_t index(int p, int q) const noexcept { return static_cast<std::size_t>(p) * grid_.Q + q; }

  void reset_maps() {
    d1_.assign(cells(grid_), Matrix());
    d2_.assign(cells(grid_), Matrix());
    for (int p = 0; p < grid_.P; ++p)
      for (int q = 0; q < grid_.Q; ++q) {
        d1_[index(p, q)] = Matrix(dim(p + 1, q), dim(p, q));
        d2_[index(p, q)] = Matrix(dim(p, q + 1), dim(p, q));
      }
  }

  void set_map(std::vector<Matrix>& store, int p, int q, std::size_t rows, Matrix m, const char* which) {
    if (!grid_.contains(p, q)) {
      if (m.is_zero()) return;
      throw InvalidComplex(std::string(which) + " given at (" + to_string(Bidegree{p, q}) + ") outside the grid");
    }
    if (m.rows() != rows || m.cols() != dim(p, q))
      throw InvalidComplex(std::string(which) + " at (" + to_string(Bidegree{p, q}) + ") has shape " + std::to_string(m.rows()) +
                           "x" + std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                           std::to_string(dim(p, q)));
    store[index(p, q)] = std::move(m);
  }

  Grid grid_{};
  std::string name_;
  std::vector<std::size_t> dims_;
  std::vector<Matrix> d1_, d2_;
  std::map<Bidegree, std::vector<std::string>> labels_;
  std::optional<int> certified_max_p_;
};

struct Violation {
  std::string identity;  // "d1d1", "d2d2" or "d1d2+d2d1"
  Bidegree at;
  Matrix product;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
  std::string summary() const {
    if (ok()) return "valid";
    std::string s;
    for (const auto& v : violations) {
      if (!s.empty()) s += "; ";
      s += v.identity + " != 0 at (" + to_string(v.at) + ")";
    }
    return s;
  }
};

inline ValidationReport validate(const DoubleComplex& c) {
  ValidationReport rep;
  const Grid& g = c.grid();
  for (int p = 0; p < g.P; ++p)
    for (int q = 0; q < g.Q; ++q) {
      if (c.dim(p, q) == 0) continue;
      Matrix a = c.d1(p + 1, q) * c.d1(p, q);
      if (!a.is_zero()) rep.violations.push_back({"d1d1", {p, q}, a});
      Matrix b = c.d2(p, q + 1) * c.d2(p, q);
      if (!b.is_zero()) rep.violations.push_back({"d2d2", {p, q}, b});
      Matrix m = c.d1(p, q + 1) * c.d2(p, q) + c.d2(p + 1, q) * c.d1(p, q);
      if (!m.is_zero()) rep.violations.push_back({"d1d2+d2d1", {p, q}, m});
    }
  return rep;
}

// Entry guard for every engine that needs a genuine double complex.
inline void ensure_valid(const DoubleComplex& c) {
  ValidationReport r = validate(c);
  if (!r.ok()) throw InvalidComplex("complex failed validation: " + r.summary());
}

// Commuting-convention data (d1 d2 = d2 d1) becomes anticommuting by
// multiplying d2 on column p with (-1)^p.
inline DoubleComplex twist_commuting(const DoubleComplex& c) {
  DoubleComplex out = c;
  for (int p = 1; p < c.grid().P; p += 2)
    for (int q = 0; q < c.grid().Q; ++q) out.set_d2(p, q, -c.d2(p, q));
  return out;
}

// Exchange the roles of d1 and d2 by transposing the grid.  Every "barred"
// object of the theory is the unbarred object of the swapped complex, read at
// the transposed bidegree.
inline DoubleComplex swapped(const DoubleComplex& c) {
  const Grid& g = c.grid();
  std::map<Bidegree, std::size_t> dims;
  for (int p = 0; p < g.P; ++p)
    for (int q = 0; q < g.Q; ++q) dims[{q, p}] = c.dim(p, q);
  DoubleComplex s(Grid{g.Q, g.P}, dims);
  for (int p = 0; p < g.P; ++p)
    for (int q = 0; q < g.Q; ++q) {
      s.set_d1(q, p, c.d2(p, q));
      s.set_d2(q, p, c.d1(p, q));
    }
  s.set_name(c.name());
  return s;
}

inline DoubleComplex direct_sum(const DoubleComplex& a, const DoubleComplex& b) {
  Grid g{std::max(a.grid().P, b.grid().P), std::max(a.grid().Q, b.grid().Q)};
  std::map<Bidegree, std::size_t> dims;
  for (int p = 0; p < g.P; ++p)
    for (int q = 0; q < g.Q; ++q) dims[{p, q}] = a.dim(p, q) + b.dim(p, q);
  DoubleComplex s(g, dims);
  auto diag = [](const Matrix& x, const Matrix& y) {
    Matrix m(x.rows() + y.rows(), x.cols() + y.cols());
    m.set_block(0, 0, x);
    m.set_block(x.rows(), x.cols(), y);
    return m;
  };
  for (int p = 0; p < g.P; ++p)
    for (int q = 0; q < g.Q; ++q) {
      s.set_d1(p, q, diag(a.d1(p, q), b.d1(p, q)));
      s.set_d2(p, q, diag(a.d2(p, q), b.d2(p, q)));
    }
  if (a.has_labels() || b.has_labels()) {
    for (int p = 0; p < g.P; ++p)
      for (int q = 0; q < g.Q; ++q) {
        std::vector<std::string> l;
        for (std::size_t i = 0; i < a.dim(p, q); ++i)
          l.push_back(a.labels(p, q).empty() ? "a" + std::to_string(i) : a.labels(p, q)[i]);
        for (std::size_t i = 0; i < b.dim(p, q); ++i)
          l.push_back(b.labels(p, q).empty() ? "b" + std::to_string(i) : b.labels(p, q)[i]);
        if (!l.empty()) s.set_labels(p, q, std::move(l));
      }
  }
  return s;
}

using BasisChange = std::map<Bidegree, Matrix>;

// Columns of T(p,q) are the new basis vectors written in old coordinates;
// bidegrees missing from the map keep their basis.
inline DoubleComplex change_of_basis(const DoubleComplex& c, const BasisChange& t) {
  const Grid& g = c.grid();
  auto get = [&](int p, int q) -> Matrix {
    auto it = t.find({p, q});
    if (it == t.end()) return Matrix::identity(c.dim(p, q));
    if (it->second.rows() != c.dim(p, q) || it->second.cols() != c.dim(p, q))
      throw DimensionMismatch("basis change at (" + to_string(Bidegree{p, q}) + ") has the wrong shape");
    return it->second;
  };
  std::map<Bidegree, Matrix> inv;
  for (int p = 0; p < g.P; ++p)
    for (int q = 0; q < g.Q; ++q) {
      try {
        inv[{p, q}] = inverse(get(p, q));
      } catch (const SingularMatrix&) {
        throw SingularMatrix("basis change at (" + to_string(Bidegree{p, q}) + ") is singular");
      }
    }
  std::map<Bidegree, std::size_t> dims;
  for (int p = 0; p < g.P; ++p)
    for (int q = 0; q < g.Q; ++q) dims[{p, q}] = c.dim(p, q);
  DoubleComplex out(g, dims);
  out.set_name(c.name());
  for (int p = 0; p < g.P; ++p)
    for (int q = 0; q < g.Q; ++q) {
      Matrix src = get(p, q);
      if (g.contains(p + 1, q)) out.set_d1(p, q, inv[{p + 1, q}] * c.d1(p, q) * src);
      if (g.contains(p, q + 1)) out.set_d2(p, q, inv[{p, q + 1}] * c.d2(p, q) * src);
    }
  return out;
}

struct TotalComplex {
  // Component k is the direct sum over p+q=k in lexicographic (p,q) order.
  std::vector<std::vector<Bidegree>> blocks;
  std::vector<std::vector<std::size_t>> offsets;
  std::vector<std::size_t> dims;
  std::vector<Matrix> D;  // D[k]: degree k -> k+1

  std::size_t degrees() const noexcept { return dims.size(); }

  // Position of the (p,q) block inside its total degree.
  std::size_t offset_of(Bidegree b) const {
    const int k = b.p + b.q;
    const auto& bl = blocks[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < bl.size(); ++i)
      if (bl[i] == b) return offsets[static_cast<std::size_t>(k)][i];
    throw DimensionMismatch("bidegree not in total complex");
  }
};

inline TotalComplex total_complex(const DoubleComplex& c) {
  const Grid& g = c.grid();
  TotalComplex t;
  const int K = g.P + g.Q - 1;  // degrees 0..P+Q-2
  if (g.P <= 0 || g.Q <= 0) return t;
  t.blocks.resize(static_cast<std::size_t>(K));
  t.offsets.resize(static_cast<std::size_t>(K));
  t.dims.assign(static_cast<std::size_t>(K), 0);
  for (int p = 0; p < g.P; ++p)
    for (int q = 0; q < g.Q; ++q) {
      auto k = static_cast<std::size_t>(p + q);
      t.blocks[k].push_back({p, q});
    }
  for (std::size_t k = 0; k < t.blocks.size(); ++k) {
    std::sort(t.blocks[k].begin(), t.blocks[k].end());
    std::size_t off = 0;
    for (const auto& b : t.blocks[k]) {
      t.offsets[k].push_back(off);
      off += c.dim(b);
    }
    t.dims[k] = off;
  }
  for (std::size_t k = 0; k < t.blocks.size(); ++k) {
    std::size_t next = k + 1 < t.dims.size() ? t.dims[k + 1] : 0;
    Matrix D(next, t.dims[k]);
    if (next > 0) {
      for (std::size_t i = 0; i < t.blocks[k].size(); ++i) {
        const Bidegree b = t.blocks[k][i];
        const std::size_t col = t.offsets[k][i];
        if (c.dim(b) == 0) continue;
        if (g.contains(b.p + 1, b.q)) D.set_block(t.offset_of({b.p + 1, b.q}), col, c.d1(b.p, b.q));
        if (g.contains(b.p, b.q + 1)) D.set_block(t.offset_of({b.p, b.q + 1}), col, c.d2(b.p, b.q));
      }
    }
    t.D.push_back(std::move(D));
  }
  for (std::size_t k = 0; k + 1 < t.D.size(); ++k)
    if (!(t.D[k + 1] * t.D[k]).is_zero())
      throw InvalidComplex("total differential does not square to zero in degree " + std::to_string(k));
  return t;
}

inline std::vector<std::size_t> de_rham_dims(const TotalComplex& t) {
  std::vector<std::size_t> ranks;
  for (const auto& d : t.D) ranks.push_back(rank(d));
  std::vector<std::size_t> b(t.dims.size());
  for (std::size_t k = 0; k < t.dims.size(); ++k) b[k] = t.dims[k] - ranks[k] - (k > 0 ? ranks[k - 1] : 0);
  return b;
}

// Embed a pure-type vector of A^{p,q} into total degree p+q.
inline Vector embed(const TotalComplex& t, const DoubleComplex& c, Bidegree b, const Vector& v) {
  Vector out(t.dims[static_cast<std::size_t>(b.p + b.q)]);
  const std::size_t off = t.offset_of(b);
  for (std::size_t i = 0; i < c.dim(b); ++i) out[off + i] = v[i];
  return out;
}

// The (p,q) component of a total-degree vector.
inline Vector component(const TotalComplex& t, const DoubleComplex& c, Bidegree b, const Vector& x) {
  const std::size_t off = t.offset_of(b);
  return Vector(x.begin() + static_cast<std::ptrdiff_t>(off),
                x.begin() + static_cast<std::ptrdiff_t>(off + c.dim(b)));
}

// Pure-type d-exact elements: A^{p,q} intersected with the image of D.
inline Subspace pure_exact_space(const TotalComplex& t, const DoubleComplex& c, Bidegree b) {
  const auto k = static_cast<std::size_t>(b.p + b.q);
  const std::size_t n = c.dim(b);
  if (n == 0 || k == 0) return Subspace(n);
  Subspace im = image_basis(t.D[k - 1]);
  Matrix inc(t.dims[k], n);
  const std::size_t off = t.offset_of(b);
  for (std::size_t i = 0; i < n; ++i) inc(off + i, i) = 1;
  return preimage(inc, im);
}

}  // namespace ddbar
