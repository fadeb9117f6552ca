#pragma once

// Exact dense linear algebra over Q and the subspace calculus used by every
// cohomology computation in the library.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ddbar/errors.hpp"

namespace ddbar {

using Rational = mpq_class;
using Integer = mpz_class;
using Vector = std::vector<Rational>;

// Accepts "a", "-a", "a/b" with optional surrounding blanks; result is canonical.
inline Rational parse_rational(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  std::string s(text.substr(b, e - b));
  if (s.empty()) throw ParseError("empty rational", b);
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  std::size_t slash = std::string::npos;
  bool digits = false;
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] == '/') {
      if (slash != std::string::npos || !digits) throw ParseError("malformed rational '" + s + "'", b + k);
      slash = k;
      digits = false;
    } else if (std::isdigit(static_cast<unsigned char>(s[k]))) {
      digits = true;
    } else {
      throw ParseError("malformed rational '" + s + "'", b + k);
    }
  }
  if (!digits) throw ParseError("malformed rational '" + s + "'", b + s.size());
  if (s[0] == '+') s.erase(0, 1);
  Rational q;
  if (slash == std::string::npos) {
    q = Rational(Integer(s));
  } else {
    std::size_t sl = s.find('/');
    Integer num(s.substr(0, sl)), den(s.substr(sl + 1));
    if (den == 0) throw ParseError("zero denominator in '" + s + "'", b + sl + 1);
    q = Rational(num, den);
    q.canonicalize();
  }
  return q;
}

inline std::string to_string(const Rational& x) { return x.get_str(); }

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix column_vector(const Vector& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }

  static Matrix from_columns(const std::vector<Vector>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw DimensionMismatch("from_columns: column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const {
    for (const auto& x : data_)
      if (sgn(x) != 0) return false;
    return true;
  }

  Vector column(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void set_column(std::size_t j, const Vector& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("block out of range");
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DimensionMismatch("set_block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Matrix select_columns(const std::vector<std::size_t>& idx) const {
    Matrix m(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
    return m;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t k = 0; k < a.data_.size(); ++k)
      if (a.data_[k] != b.data_[k]) return false;
    return true;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("matrix product " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " * " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  Matrix c(a.rows(), b.cols());
  Rational t;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rational& x = a(i, k);
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (sgn(b(k, j)) == 0) continue;
        t = x * b(k, j);
        c(i, j) += t;
      }
    }
  return c;
}

inline Vector operator*(const Matrix& a, const Vector& v) {
  if (a.cols() != v.size()) throw DimensionMismatch("matrix-vector product");
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (sgn(a(i, k)) != 0 && sgn(v[k]) != 0) out[i] += a(i, k) * v[k];
  return out;
}

inline Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix sum");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix difference");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

inline Matrix operator*(const Rational& s, const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

inline Matrix operator-(const Matrix& a) { return Rational(-1) * a; }

inline Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("hstack row mismatch");
  Matrix c(a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, a.cols(), b);
  return c;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("vstack column mismatch");
  Matrix c(a.rows() + b.rows(), a.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), 0, b);
  return c;
}

inline bool is_zero(const Vector& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

struct Rref {
  Matrix reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
};

// Gauss-Jordan with the first nonzero entry of each column as pivot.
inline Rref rref(Matrix m) {
  Rref out;
  const std::size_t R = m.rows(), C = m.cols();
  std::size_t row = 0;
  Rational f, t;
  for (std::size_t col = 0; col < C && row < R; ++col) {
    std::size_t piv = row;
    while (piv < R && sgn(m(piv, col)) == 0) ++piv;
    if (piv == R) continue;
    m.swap_rows(row, piv);
    if (m(row, col) != 1) {
      Rational inv = 1 / m(row, col);
      for (std::size_t j = col; j < C; ++j) m(row, j) *= inv;
    }
    for (std::size_t i = 0; i < R; ++i) {
      if (i == row || sgn(m(i, col)) == 0) continue;
      f = m(i, col);
      for (std::size_t j = col; j < C; ++j) {
        if (sgn(m(row, j)) == 0) continue;
        t = f * m(row, j);
        m(i, j) -= t;
      }
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.rank = row;
  out.reduced = std::move(m);
  return out;
}

// Fraction-free Bareiss elimination on the row-scaled integer matrix.
inline std::size_t rank(const Matrix& m) {
  const std::size_t R = m.rows(), C = m.cols();
  std::vector<std::vector<Integer>> a(R, std::vector<Integer>(C));
  for (std::size_t i = 0; i < R; ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < C; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < C; ++j) a[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
  }
  Integer prev = 1, t;
  std::size_t r = 0;
  for (std::size_t col = 0; col < C && r < R; ++col) {
    std::size_t piv = r;
    while (piv < R && a[piv][col] == 0) ++piv;
    if (piv == R) continue;
    std::swap(a[r], a[piv]);
    for (std::size_t i = r + 1; i < R; ++i) {
      for (std::size_t j = col + 1; j < C; ++j) {
        t = a[r][col] * a[i][j] - a[i][col] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][col] = 0;
    }
    prev = a[r][col];
    ++r;
  }
  return r;
}

// Particular solution of a x = b, or nothing when inconsistent.
inline std::optional<Vector> solve(const Matrix& a, const Vector& b) {
  if (a.rows() != b.size()) throw DimensionMismatch("solve: rhs length");
  Rref rr = rref(hstack(a, Matrix::column_vector(b)));
  if (!rr.pivots.empty() && rr.pivots.back() == a.cols()) return std::nullopt;
  Vector x(a.cols());
  for (std::size_t k = 0; k < rr.rank; ++k) x[rr.pivots[k]] = rr.reduced(k, a.cols());
  return x;
}

inline Matrix inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw SingularMatrix("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  Rref rr = rref(hstack(a, Matrix::identity(n)));
  if (rr.rank < n || (n > 0 && rr.pivots[n - 1] != n - 1)) throw SingularMatrix("matrix is singular");
  return rr.reduced.block(0, n, n, n);
}

class Subspace {
 public:
  explicit Subspace(std::size_t ambient = 0) : ambient_(ambient), basis_(ambient, 0) {}

  // Column span of the generators, stored as the transpose of the RREF of their transpose.
  static Subspace span(const Matrix& generators) {
    Subspace s(generators.rows());
    if (generators.cols() == 0) return s;
    Rref rr = rref(generators.transpose());
    s.basis_ = rr.reduced.block(0, 0, rr.rank, generators.rows()).transpose();
    s.pivots_ = std::move(rr.pivots);
    return s;
  }

  static Subspace full(std::size_t n) { return span(Matrix::identity(n)); }

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.cols(); }
  const Matrix& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }
  bool is_zero() const noexcept { return dim() == 0; }
  bool is_full() const noexcept { return dim() == ambient_; }

  // Basis column j carries 1 at pivot j and 0 at the other pivots, so the
  // coefficients of a member are read off at the pivot rows.
  bool contains(const Vector& v) const {
    if (v.size() != ambient_) throw DimensionMismatch("contains: ambient mismatch");
    Vector r = v;
    for (std::size_t j = 0; j < dim(); ++j) {
      Rational c = v[pivots_[j]];
      if (sgn(c) == 0) continue;
      for (std::size_t i = 0; i < ambient_; ++i)
        if (sgn(basis_(i, j)) != 0) r[i] -= c * basis_(i, j);
    }
    return ddbar::is_zero(r);
  }

  bool contains(const Subspace& s) const {
    if (s.ambient_ != ambient_) throw DimensionMismatch("contains: ambient mismatch");
    if (s.dim() > dim()) return false;
    for (std::size_t j = 0; j < s.dim(); ++j)
      if (!contains(s.basis_.column(j))) return false;
    return true;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

 private:
  std::size_t ambient_;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

inline Subspace kernel_basis(const Matrix& m) {
  Rref rr = rref(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : rr.pivots) is_pivot[p] = true;
  std::vector<Vector> vecs;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    Vector v(n);
    v[f] = 1;
    for (std::size_t k = 0; k < rr.rank; ++k) v[rr.pivots[k]] = -rr.reduced(k, f);
    vecs.push_back(std::move(v));
  }
  return Subspace::span(Matrix::from_columns(vecs, n));
}

inline Subspace image_basis(const Matrix& m) { return Subspace::span(m); }

inline Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("subspace_sum: ambient mismatch");
  return Subspace::span(hstack(a.basis(), b.basis()));
}

inline Subspace subspace_intersection(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("subspace_intersection: ambient mismatch");
  if (a.is_zero() || b.is_zero()) return Subspace(a.ambient_dim());
  if (a.is_full()) return b;
  if (b.is_full()) return a;
  Subspace k = kernel_basis(hstack(a.basis(), -b.basis()));
  Matrix coeffs = k.basis().block(0, 0, a.dim(), k.dim());
  return Subspace::span(a.basis() * coeffs);
}

inline std::size_t quotient_dim(const Subspace& big, const Subspace& small) {
  if (!big.contains(small))
    throw ContainmentViolation("quotient_dim: subspace of dimension " + std::to_string(small.dim()) +
                               " is not contained in the subspace of dimension " + std::to_string(big.dim()));
  return big.dim() - small.dim();
}

// m applied to every vector of s.
inline Subspace image_of(const Matrix& m, const Subspace& s) {
  if (m.cols() != s.ambient_dim()) throw DimensionMismatch("image_of: domain mismatch");
  return Subspace::span(m * s.basis());
}

// {x : m x in s}
inline Subspace preimage(const Matrix& m, const Subspace& s) {
  if (m.rows() != s.ambient_dim()) throw DimensionMismatch("preimage: codomain mismatch");
  Subspace k = kernel_basis(hstack(m, -s.basis()));
  return Subspace::span(k.basis().block(0, 0, m.cols(), k.dim()));
}

// Incremental echelon form that remembers how each stored row was built from
// the accepted inputs, so membership tests also return coordinates.
class SpanBuilder {
 public:
  explicit SpanBuilder(std::size_t ambient) : ambient_(ambient) {}

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t size() const noexcept { return rows_.size(); }

  bool insert(const Vector& v) {
    if (v.size() != ambient_) throw DimensionMismatch("SpanBuilder::insert");
    Vector res = v;
    Vector combo(rows_.size() + 1);
    combo.back() = 1;
    for (const auto& row : rows_) {
      Rational lam = res[row.pivot];
      if (sgn(lam) == 0) continue;
      axpy(res, -lam, row.vec);
      for (std::size_t k = 0; k < row.combo.size(); ++k)
        if (sgn(row.combo[k]) != 0) combo[k] -= lam * row.combo[k];
    }
    std::size_t piv = 0;
    while (piv < ambient_ && sgn(res[piv]) == 0) ++piv;
    if (piv == ambient_) return false;
    Rational inv = 1 / res[piv];
    for (auto& x : res) x *= inv;
    for (auto& x : combo) x *= inv;
    rows_.push_back(Row{piv, std::move(res), std::move(combo)});
    return true;
  }

  // Coefficients over the accepted inputs (in acceptance order).
  std::optional<Vector> express(const Vector& v) const {
    if (v.size() != ambient_) throw DimensionMismatch("SpanBuilder::express");
    Vector res = v;
    Vector coeff(rows_.size());
    for (const auto& row : rows_) {
      Rational lam = res[row.pivot];
      if (sgn(lam) == 0) continue;
      axpy(res, -lam, row.vec);
      for (std::size_t k = 0; k < row.combo.size(); ++k)
        if (sgn(row.combo[k]) != 0) coeff[k] += lam * row.combo[k];
    }
    if (!ddbar::is_zero(res)) return std::nullopt;
    return coeff;
  }

 private:
  static void axpy(Vector& y, const Rational& a, const Vector& x) {
    for (std::size_t i = 0; i < y.size(); ++i)
      if (sgn(x[i]) != 0) y[i] += a * x[i];
  }
  struct Row {
    std::size_t pivot;
    Vector vec;
    Vector combo;
  };
  std::size_t ambient_;
  std::vector<Row> rows_;
};

// A basis of big/small: representatives are the big basis vectors that extend
// the small basis, taken greedily in order.
class QuotientBasis {
 public:
  QuotientBasis() = default;
  QuotientBasis(const Subspace& big, const Subspace& small) : builder_(big.ambient_dim()) {
    if (!big.contains(small)) throw ContainmentViolation("QuotientBasis: small subspace not contained in big");
    small_dim_ = small.dim();
    for (std::size_t j = 0; j < small.dim(); ++j) builder_.insert(small.basis().column(j));
    std::vector<Vector> reps;
    for (std::size_t j = 0; j < big.dim(); ++j) {
      Vector v = big.basis().column(j);
      if (builder_.insert(v)) reps.push_back(std::move(v));
    }
    reps_ = Matrix::from_columns(reps, big.ambient_dim());
  }

  std::size_t dim() const noexcept { return reps_.cols(); }
  std::size_t ambient_dim() const noexcept { return builder_.ambient_dim(); }
  const Matrix& representatives() const noexcept { return reps_; }

  // Class coordinates of v, which must lie in big.
  Vector coordinates(const Vector& v) const {
    auto c = builder_.express(v);
    if (!c) throw ContainmentViolation("QuotientBasis::coordinates: vector outside the numerator space");
    return Vector(c->begin() + static_cast<std::ptrdiff_t>(small_dim_), c->end());
  }

  bool is_zero_class(const Vector& v) const { return is_zero(coordinates(v)); }

  Matrix coordinates(const Matrix& vectors) const {
    Matrix out(dim(), vectors.cols());
    for (std::size_t j = 0; j < vectors.cols(); ++j) out.set_column(j, coordinates(vectors.column(j)));
    return out;
  }

 private:
  SpanBuilder builder_{0};
  std::size_t small_dim_ = 0;
  Matrix reps_;
};

// A chain of linear constraints on stacked unknown blocks.  Each stage is an
// equation sum_k M_k x_{block_k} = 0 landing in one target space.
struct TowerStage {
  std::vector<std::pair<std::size_t, Matrix>> terms;
};

struct TowerSystem {
  std::vector<std::size_t> block_dims;
  std::vector<TowerStage> stages;

  std::size_t offset(std::size_t block) const {
    std::size_t o = 0;
    for (std::size_t k = 0; k < block; ++k) o += block_dims[k];
    return o;
  }

  std::size_t unknowns() const { return offset(block_dims.size()); }

  Matrix assemble() const {
    std::size_t total_rows = 0;
    std::vector<std::size_t> stage_rows;
    for (std::size_t s = 0; s < stages.size(); ++s) {
      std::size_t rows = 0;
      bool first = true;
      for (const auto& [blk, m] : stages[s].terms) {
        if (blk >= block_dims.size()) throw DimensionMismatch("tower stage references unknown block");
        if (m.cols() != block_dims[blk])
          throw DimensionMismatch("tower stage " + std::to_string(s) + ": map domain " + std::to_string(m.cols()) +
                                  " does not match block dimension " + std::to_string(block_dims[blk]));
        if (first) {
          rows = m.rows();
          first = false;
        } else if (m.rows() != rows) {
          throw DimensionMismatch("tower stage " + std::to_string(s) + ": terms land in different dimensions");
        }
      }
      stage_rows.push_back(rows);
      total_rows += rows;
    }
    Matrix big(total_rows, unknowns());
    std::size_t r0 = 0;
    for (std::size_t s = 0; s < stages.size(); ++s) {
      for (const auto& [blk, m] : stages[s].terms) {
        Matrix cur = big.block(r0, offset(blk), m.rows(), m.cols());
        big.set_block(r0, offset(blk), cur + m);
      }
      r0 += stage_rows[s];
    }
    return big;
  }
};

// Kernel of the assembled block system projected onto one block.
inline Subspace solve_tower(const TowerSystem& sys, std::size_t target) {
  if (target >= sys.block_dims.size()) throw DimensionMismatch("solve_tower: target block out of range");
  const std::size_t n = sys.block_dims[target];
  if (n == 0) return Subspace(0);
  Subspace k = kernel_basis(sys.assemble());
  return Subspace::span(k.basis().block(sys.offset(target), 0, n, k.dim()));
}

}  // namespace ddbar
