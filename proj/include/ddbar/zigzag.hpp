#pragma once

// Structure theory: closed-form invariants of squares and zigzags, recovery
// of multiplicities from measured invariants, and decomposition certificates.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ddbar/bca.hpp"
#include "ddbar/shapes.hpp"

namespace ddbar {

// Per-bidegree invariant tables; index r-1 in the page vectors.
struct Invariants {
  Grid grid;
  int r_max = 0;
  DimGrid dims;
  std::vector<DimGrid> e, ebar, bc, a;
  std::vector<std::size_t> betti;  // by total degree, 0..P+Q-2

  // dims, then e, ebar, bc, a for r = 1..r_max, each flattened p-major.
  std::vector<long> flatten() const {
    std::vector<long> v;
    auto put = [&](const DimGrid& d) {
      for (auto x : d.values) v.push_back(static_cast<long>(x));
    };
    put(dims);
    for (int r = 0; r < r_max; ++r) {
      put(e[static_cast<std::size_t>(r)]);
      put(ebar[static_cast<std::size_t>(r)]);
      put(bc[static_cast<std::size_t>(r)]);
      put(a[static_cast<std::size_t>(r)]);
    }
    return v;
  }
  friend bool operator==(const Invariants&, const Invariants&) = default;
};

namespace detail {

inline Invariants empty_invariants(Grid g, int r_max) {
  Invariants inv;
  inv.grid = g;
  inv.r_max = r_max;
  inv.dims = DimGrid(g);
  inv.e.assign(static_cast<std::size_t>(r_max), DimGrid(g));
  inv.ebar = inv.bc = inv.a = inv.e;
  inv.betti.assign(static_cast<std::size_t>(std::max(0, g.P + g.Q - 1)), 0);
  return inv;
}

inline void bump(DimGrid& d, Bidegree b) {
  if (d.grid.contains(b.p, b.q)) ++d.at(b.p, b.q);
}

}  // namespace detail

// Surviving basis vectors of E_{r,BC}(Z): the dot itself, or the images c_i
// not yet killed from an open end.
inline std::vector<Bidegree> bc_survivors(const ZigzagShape& z, int r) {
  if (z.is_dot()) return {z.start};
  const int l = z.generators;
  std::vector<Bidegree> out;
  for (int i = 0; i <= l; ++i) {
    if ((i == 0 && !z.left) || (i == l && !z.right)) continue;
    if (!z.left && i >= 1 && i <= r - 1) continue;
    if (!z.right && i >= l - r + 1 && i <= l - 1) continue;
    out.push_back(z.image_at(i));
  }
  return out;
}

// Surviving generators a_i of E_{r,A}(Z).
inline std::vector<Bidegree> a_survivors(const ZigzagShape& z, int r) {
  if (z.is_dot()) return {z.start};
  const int l = z.generators;
  const auto gens = z.generator_bidegrees();
  std::vector<Bidegree> out;
  for (int i = 1; i <= l; ++i) {
    if (z.left && i <= r - 1) continue;
    if (z.right && i >= l - r + 2) continue;
    out.push_back(gens[static_cast<std::size_t>(i - 1)]);
  }
  return out;
}

// Column-filtration page E_r(Z).
inline std::vector<Bidegree> page_survivors(const ZigzagShape& z, int r) {
  const auto gens = z.generator_bidegrees();
  const std::string t = z.type();
  if (t == "dot" || t == "odd-M") return {gens.front()};
  if (t == "odd-L") return {z.image_at(z.generators)};
  if (t == "even-I" && r <= z.generators) return {gens.front(), z.image_at(z.generators)};
  return {};
}

// Row-filtration page: mirror image of the above.
inline std::vector<Bidegree> bar_page_survivors(const ZigzagShape& z, int r) {
  const auto gens = z.generator_bidegrees();
  const std::string t = z.type();
  if (t == "dot" || t == "odd-M") return {gens.back()};
  if (t == "odd-L") return {z.image_at(0)};
  if (t == "even-II" && r <= z.generators) return {gens.back(), z.image_at(0)};
  return {};
}

inline Invariants predicted_invariants(const Shape& s, Grid g, int r_max) {
  Invariants inv = detail::empty_invariants(g, r_max);
  for (const auto& b : support(s)) detail::bump(inv.dims, b);
  const auto* z = std::get_if<ZigzagShape>(&s);
  if (!z) return inv;
  for (int r = 1; r <= r_max; ++r) {
    const auto i = static_cast<std::size_t>(r - 1);
    for (const auto& b : page_survivors(*z, r)) detail::bump(inv.e[i], b);
    for (const auto& b : bar_page_survivors(*z, r)) detail::bump(inv.ebar[i], b);
    for (const auto& b : bc_survivors(*z, r)) detail::bump(inv.bc[i], b);
    for (const auto& b : a_survivors(*z, r)) detail::bump(inv.a[i], b);
  }
  const std::string t = z->type();
  const int k = z->total_degree();
  if ((t == "dot" || t == "odd-M") && k < static_cast<int>(inv.betti.size())) ++inv.betti[static_cast<std::size_t>(k)];
  if (t == "odd-L" && k + 1 < static_cast<int>(inv.betti.size())) ++inv.betti[static_cast<std::size_t>(k + 1)];
  return inv;
}

inline Invariants measured_invariants(const DoubleComplex& c, int r_max) {
  Invariants inv = detail::empty_invariants(c.grid(), r_max);
  for (const auto& [p, q] : c.bidegrees()) inv.dims.at(p, q) = c.dim(p, q);
  const PageTable pg = page_dims(c, r_max);
  const BcaTable b = bca_dims(c, r_max);
  inv.e = pg.e;
  inv.ebar = pg.ebar;
  inv.bc = b.bc;
  inv.a = b.a;
  if (c.grid().P > 0 && c.grid().Q > 0) inv.betti = de_rham_dims(total_complex(c));
  return inv;
}

struct InventoryEntry {
  Shape shape;
  std::size_t multiplicity = 0;
};

struct ShapeInventory {
  std::vector<InventoryEntry> entries;  // nonzero multiplicities, ordered by support

  std::size_t count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.multiplicity;
    return n;
  }
  friend bool operator==(const ShapeInventory& a, const ShapeInventory& b) {
    if (a.entries.size() != b.entries.size()) return false;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
      if (!(a.entries[i].shape == b.entries[i].shape) || a.entries[i].multiplicity != b.entries[i].multiplicity)
        return false;
    return true;
  }
};

inline ShapeInventory make_inventory(const std::vector<Shape>& shapes) {
  std::vector<Shape> sorted = shapes;
  std::stable_sort(sorted.begin(), sorted.end(), shape_less);
  ShapeInventory inv;
  for (const auto& s : sorted) {
    if (!inv.entries.empty() && inv.entries.back().shape == s)
      ++inv.entries.back().multiplicity;
    else
      inv.entries.push_back({s, 1});
  }
  return inv;
}

enum class SolveStatus { Unique, Ambiguous };

struct MultiplicityResult {
  SolveStatus status = SolveStatus::Unique;
  ShapeInventory inventory;                 // the answer when unique
  std::vector<ShapeInventory> alternatives;  // minimal-support solutions when ambiguous
  std::size_t solution_space_dim = 0;        // nullity of the invariant system
  std::size_t candidate_shapes = 0;
  bool search_truncated = false;
};

namespace detail {

inline std::size_t node_budget() { return 2'000'000; }

}  // namespace detail

inline MultiplicityResult multiplicity_solve(const DoubleComplex& c, int r_max = 0) {
  ensure_valid(c);
  const Grid g = c.grid();
  if (r_max <= 0) r_max = g.diameter();
  const Invariants measured = measured_invariants(c, r_max);
  const std::vector<long> target = measured.flatten();

  // Shapes whose support lies where the complex is nonzero.
  std::vector<Shape> cand;
  std::vector<std::vector<long>> cols;
  for (const auto& s : enumerate_shapes(g)) {
    bool ok = true;
    for (const auto& b : support(s))
      if (c.dim(b) == 0) ok = false;
    if (!ok) continue;
    cand.push_back(s);
    cols.push_back(predicted_invariants(s, g, r_max).flatten());
  }
  MultiplicityResult res;
  res.candidate_shapes = cand.size();
  const std::size_t n = cand.size();
  // Rows where every candidate and the target vanish carry no information.
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < target.size(); ++i) {
    bool any = target[i] != 0;
    for (std::size_t j = 0; j < n && !any; ++j) any = cols[j][i] != 0;
    if (any) rows.push_back(i);
  }
  Matrix m(rows.size(), n);
  Vector rhs(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rhs[i] = target[rows[i]];
    for (std::size_t j = 0; j < n; ++j) m(i, j) = cols[j][rows[i]];
  }
  // Bounded nonnegative integer solutions of m x = rhs, parametrised by the
  // free columns of the echelon form.
  Rref rr = rref(hstack(m, Matrix::column_vector(rhs)));
  if (!rr.pivots.empty() && rr.pivots.back() == n)
    throw ConsistencyError("multiplicity system infeasible: invariants do not decompose into shapes");
  std::vector<bool> is_pivot(n, false);
  for (auto pv : rr.pivots) is_pivot[pv] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  res.solution_space_dim = free_cols.size();

  std::vector<long> bound(n);
  for (std::size_t j = 0; j < n; ++j) {
    long b = -1;
    for (const auto& s : support(cand[j])) {
      long d = static_cast<long>(c.dim(s));
      if (b < 0 || d < b) b = d;
    }
    bound[j] = b < 0 ? 0 : b;
  }

  std::vector<std::vector<long>> solutions;
  std::vector<long> freev(free_cols.size(), 0);
  std::size_t nodes = 0;
  std::function<void(std::size_t)> search = [&](std::size_t k) {
    if (++nodes > detail::node_budget()) {
      res.search_truncated = true;
      return;
    }
    if (k < free_cols.size()) {
      for (long v = 0; v <= bound[free_cols[k]] && !res.search_truncated; ++v) {
        freev[k] = v;
        search(k + 1);
      }
      return;
    }
    std::vector<long> x(n, 0);
    for (std::size_t f = 0; f < free_cols.size(); ++f) x[free_cols[f]] = freev[f];
    for (std::size_t i = 0; i < rr.rank; ++i) {
      Rational v = rr.reduced(i, n);
      for (std::size_t f = 0; f < free_cols.size(); ++f) v -= rr.reduced(i, free_cols[f]) * freev[f];
      if (v.get_den() != 1 || sgn(v) < 0 || v > bound[rr.pivots[i]]) return;
      x[rr.pivots[i]] = v.get_num().get_si();
    }
    solutions.push_back(std::move(x));
  };
  search(0);
  if (solutions.empty() && !res.search_truncated)
    throw ConsistencyError("multiplicity system has no nonnegative integer solution");

  auto to_inventory = [&](const std::vector<long>& x) {
    ShapeInventory inv;
    for (std::size_t j = 0; j < n; ++j)
      if (x[j] > 0) inv.entries.push_back({cand[j], static_cast<std::size_t>(x[j])});
    std::stable_sort(inv.entries.begin(), inv.entries.end(),
                     [](const InventoryEntry& a, const InventoryEntry& b) { return shape_less(a.shape, b.shape); });
    return inv;
  };
  if (solutions.size() == 1 && !res.search_truncated) {
    res.status = SolveStatus::Unique;
    res.inventory = to_inventory(solutions.front());
    return res;
  }
  res.status = SolveStatus::Ambiguous;
  auto support_of = [&](const std::vector<long>& x) {
    std::vector<bool> s(n);
    for (std::size_t j = 0; j < n; ++j) s[j] = x[j] > 0;
    return s;
  };
  for (const auto& x : solutions) {
    const auto sx = support_of(x);
    bool minimal = true;
    for (const auto& y : solutions) {
      const auto sy = support_of(y);
      if (sy == sx) continue;
      bool subset = true;
      for (std::size_t j = 0; j < n; ++j)
        if (sy[j] && !sx[j]) subset = false;
      if (subset) minimal = false;
    }
    if (minimal) res.alternatives.push_back(to_inventory(x));
  }
  return res;
}

// Page-(r-1) property read off an inventory: no odd zigzag besides dots and
// no even zigzag longer than 2(r-1).
inline bool structure_verdict(const ShapeInventory& inv, int r) {
  for (const auto& e : inv.entries) {
    const auto* z = std::get_if<ZigzagShape>(&e.shape);
    if (!z || e.multiplicity == 0) continue;
    if (z->is_odd() && !z->is_dot()) return false;
    if (!z->is_odd() && z->length() > 2 * (r - 1)) return false;
  }
  return true;
}

inline std::optional<bool> structure_verdict(const DoubleComplex& c, int r) {
  MultiplicityResult m = multiplicity_solve(c);
  if (m.status != SolveStatus::Unique) return std::nullopt;
  return structure_verdict(m.inventory, r);
}

// The bca verdict with the structure criterion attached and cross-checked.
inline PageDdbarVerdict full_page_verdict(const DoubleComplex& c, int r) {
  PageDdbarVerdict v = page_ddbar_verdict(c, r, false);
  v.structure = structure_verdict(c, r);
  check_verdict_consistency(v);
  return v;
}

// New basis at each bidegree (columns of transform, so the complex in that
// basis is T^-1 d T) and, per bidegree, the block owning each new basis vector.
struct DecompositionCertificate {
  BasisChange transform;
  std::vector<Shape> blocks;
  std::map<Bidegree, std::vector<std::size_t>> assignment;
};

struct CertificateReport {
  bool ok = true;
  std::string failure;
};

// Certificate for a direct sum built in block order, optionally scrambled
// afterwards by change_of_basis(sum, scramble).
inline DecompositionCertificate certificate_for_sum(const std::vector<Shape>& blocks,
                                                    const BasisChange& scramble = {}) {
  DecompositionCertificate cert;
  cert.blocks = blocks;
  for (std::size_t j = 0; j < blocks.size(); ++j)
    for (const auto& b : support(blocks[j])) cert.assignment[b].push_back(j);
  for (const auto& [b, owners] : cert.assignment) {
    auto it = scramble.find(b);
    cert.transform[b] = it == scramble.end() ? Matrix::identity(owners.size()) : inverse(it->second);
  }
  return cert;
}

inline CertificateReport verify_certificate(const DoubleComplex& c, const DecompositionCertificate& cert) {
  CertificateReport rep;
  auto fail = [&](std::string why) {
    rep.ok = false;
    rep.failure = std::move(why);
    return rep;
  };
  for (const auto& [b, t] : cert.transform) {
    if (!c.grid().contains(b.p, b.q)) return fail("transform given outside the grid at (" + to_string(b) + ")");
    if (t.rows() != c.dim(b) || t.cols() != c.dim(b) || rank(t) != c.dim(b))
      return fail("transform at (" + to_string(b) + ") is not an invertible change of basis");
  }
  for (const auto& b : c.bidegrees()) {
    auto it = cert.assignment.find(b);
    const std::size_t assigned = it == cert.assignment.end() ? 0 : it->second.size();
    if (assigned != c.dim(b)) return fail("assignment at (" + to_string(b) + ") does not cover the basis");
    if (it != cert.assignment.end())
      for (auto j : it->second)
        if (j >= cert.blocks.size()) return fail("assignment at (" + to_string(b) + ") names an unknown block");
  }
  DoubleComplex t;
  try {
    t = change_of_basis(c, cert.transform);
  } catch (const Error& e) {
    return fail(std::string("basis change failed: ") + e.what());
  }
  // Every block owns exactly one vector per bidegree of its support.
  std::vector<std::map<Bidegree, std::size_t>> where(cert.blocks.size());
  for (const auto& [b, owners] : cert.assignment)
    for (std::size_t i = 0; i < owners.size(); ++i) {
      if (where[owners[i]].count(b)) return fail("block " + std::to_string(owners[i]) + " owns two vectors at (" + to_string(b) + ")");
      where[owners[i]][b] = i;
    }
  for (std::size_t j = 0; j < cert.blocks.size(); ++j) {
    std::vector<Bidegree> have;
    for (const auto& [b, i] : where[j]) have.push_back(b);
    if (have != support(cert.blocks[j]))
      return fail("block " + std::to_string(j) + " (" + describe(cert.blocks[j]) + ") has the wrong support");
  }
  // Off-block entries vanish; in-block arrows match the claimed shape.
  for (const auto& [b, owners] : cert.assignment) {
    for (int which = 0; which < 2; ++which) {
      const Bidegree tb = which == 0 ? Bidegree{b.p + 1, b.q} : Bidegree{b.p, b.q + 1};
      if (!c.grid().contains(tb.p, tb.q)) continue;
      const Matrix m = which == 0 ? t.d1(b.p, b.q) : t.d2(b.p, b.q);
      const auto tit = cert.assignment.find(tb);
      for (std::size_t col = 0; col < owners.size(); ++col)
        for (std::size_t row = 0; row < m.rows(); ++row) {
          if (sgn(m(row, col)) == 0) continue;
          if (tit->second[row] != owners[col])
            return fail(std::string(which == 0 ? "d1" : "d2") + " couples blocks " + std::to_string(owners[col]) +
                        " and " + std::to_string(tit->second[row]) + " at (" + to_string(b) + ")");
        }
    }
  }
  for (std::size_t j = 0; j < cert.blocks.size(); ++j) {
    const DoubleComplex model = build_shape(cert.blocks[j], c.grid());
    for (const auto& [b, i] : where[j]) {
      for (int which = 0; which < 2; ++which) {
        const Bidegree tb = which == 0 ? Bidegree{b.p + 1, b.q} : Bidegree{b.p, b.q + 1};
        const bool model_arrow =
            model.dim(tb) > 0 && !(which == 0 ? model.d1(b.p, b.q) : model.d2(b.p, b.q)).is_zero();
        bool arrow = false;
        auto tw = where[j].find(tb);
        if (tw != where[j].end()) {
          const Matrix m = which == 0 ? t.d1(b.p, b.q) : t.d2(b.p, b.q);
          arrow = sgn(m(tw->second, i)) != 0;
        }
        if (arrow != model_arrow)
          return fail("block " + std::to_string(j) + " (" + describe(cert.blocks[j]) + ") has the wrong " +
                      (which == 0 ? "d1" : "d2") + " pattern at (" + to_string(b) + ")");
      }
    }
  }
  return rep;
}

}  // namespace ddbar
