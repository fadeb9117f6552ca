#pragma once

// Higher-page Bott-Chern and Aeppli cohomology, the comparison maps between
// BC, E_r, the row pages, De Rham and A, and the page-(r-1) verdicts.

#include <optional>
#include <string>
#include <vector>

#include "ddbar/spectral.hpp"

namespace ddbar {

// Pure-type d-closed elements, ker d1 ∩ ker d2.
inline Subspace closed_space(const DoubleComplex& c, int p, int q) {
  const std::size_t n = c.dim(p, q);
  if (n == 0) return Subspace(n);
  return kernel_basis(vstack(c.d1(p, q), c.d2(p, q)));
}

// Im d1 + Im d2 at (p,q).
inline Subspace sum_of_images(const DoubleComplex& c, int p, int q) {
  if (c.dim(p, q) == 0) return Subspace(0);
  return subspace_sum(image_basis(c.d1(p - 1, q)), image_basis(c.d2(p, q - 1)));
}

namespace detail {

inline Subspace ererbar_closed(const DoubleComplex& c, const DoubleComplex& sw, int r, int p, int q) {
  if (c.dim(p, q) == 0) return Subspace(0);
  if (r <= 1) return kernel_basis(c.d1(p, q + 1) * c.d2(p, q));
  return subspace_intersection(runs(c, r - 1, p, q), runs(sw, r - 1, q, p));
}

// d1(E_{dbar,r-1}) + Im d1 d2 + d2(E_{del,r-1}).  E_{.,0} = 0, so r = 1
// leaves Im d1 d2.
inline Subspace ererbar_exact(const DoubleComplex& c, const DoubleComplex& sw, int r, int p, int q) {
  const std::size_t n = c.dim(p, q);
  if (n == 0) return Subspace(0);
  Subspace s = image_basis(c.d1(p - 1, q) * c.d2(p - 1, q - 1));
  if (r <= 1) return s;
  Subspace z = reaches_zero(c, r - 1, p - 1, q);
  if (!z.is_zero()) s = subspace_sum(s, image_of(c.d1(p - 1, q), z));
  Subspace e = reaches_zero(sw, r - 1, q - 1, p);
  if (!e.is_zero()) s = subspace_sum(s, image_of(c.d2(p, q - 1), e));
  return s;
}

}  // namespace detail

inline Subspace ererbar_closed_space(const DoubleComplex& c, int r, int p, int q) {
  if (r < 1) throw InvalidInput("ererbar_closed_space: r must be at least 1");
  return detail::ererbar_closed(c, swapped(c), r, p, q);
}

inline Subspace ererbar_exact_space(const DoubleComplex& c, int r, int p, int q) {
  if (r < 1) throw InvalidInput("ererbar_exact_space: r must be at least 1");
  return detail::ererbar_exact(c, swapped(c), r, p, q);
}

inline QuotientBasis bc_basis(const DoubleComplex& c, const DoubleComplex& sw, int r, int p, int q) {
  return QuotientBasis(closed_space(c, p, q), detail::ererbar_exact(c, sw, r, p, q));
}

inline QuotientBasis a_basis(const DoubleComplex& c, const DoubleComplex& sw, int r, int p, int q) {
  return QuotientBasis(detail::ererbar_closed(c, sw, r, p, q), sum_of_images(c, p, q));
}

struct BcaTable {
  int r_max = 0;
  std::vector<DimGrid> bc, a;  // [r-1]

  std::size_t bc_at(int r, int p, int q) const { return bc[static_cast<std::size_t>(r - 1)].at(p, q); }
  std::size_t a_at(int r, int p, int q) const { return a[static_cast<std::size_t>(r - 1)].at(p, q); }
  std::size_t bc_k(int r, int k) const { return bc[static_cast<std::size_t>(r - 1)].antidiagonal(k); }
  std::size_t a_k(int r, int k) const { return a[static_cast<std::size_t>(r - 1)].antidiagonal(k); }
};

inline BcaTable bca_dims(const DoubleComplex& c, int r_max) {
  ensure_valid(c);
  if (r_max < 1) throw InvalidInput("bca_dims: r_max must be at least 1");
  const DoubleComplex sw = swapped(c);
  const auto bidegrees = c.bidegrees();
  BcaTable t;
  t.r_max = r_max;
  t.bc.assign(static_cast<std::size_t>(r_max), DimGrid(c.grid()));
  t.a.assign(static_cast<std::size_t>(r_max), DimGrid(c.grid()));
  parallel_for(bidegrees.size(), [&](std::size_t i) {
    const auto [p, q] = bidegrees[i];
    if (c.dim(p, q) == 0) return;
    const Subspace k = closed_space(c, p, q);
    const Subspace im = sum_of_images(c, p, q);
    for (int r = 1; r <= r_max; ++r) {
      t.bc[static_cast<std::size_t>(r - 1)].at(p, q) = quotient_dim(k, detail::ererbar_exact(c, sw, r, p, q));
      t.a[static_cast<std::size_t>(r - 1)].at(p, q) = quotient_dim(detail::ererbar_closed(c, sw, r, p, q), im);
    }
  });
  return t;
}

// De Rham cohomology bases, one per total degree.
inline std::vector<QuotientBasis> de_rham_bases(const TotalComplex& t) {
  std::vector<QuotientBasis> out;
  for (std::size_t k = 0; k < t.degrees(); ++k) {
    Subspace ker = kernel_basis(t.D[k]);
    Subspace im = k > 0 ? image_basis(t.D[k - 1]) : Subspace(t.dims[k]);
    out.emplace_back(ker, im);
  }
  return out;
}

// Matrices of the maps out of E_{r,BC}^{p,q} and into E_{r,A}^{p,q}, in the
// canonical quotient bases.  dr_to_a has b_{p+q} columns.
struct BidegreeMaps {
  Bidegree at;
  Matrix bc_to_er, bc_to_ebar, bc_to_dr, bc_to_a;
  Matrix er_to_a, ebar_to_a, dr_to_a;
};

struct CanonicalMaps {
  int r = 0;
  std::vector<BidegreeMaps> maps;
  bool commutes = true;
  bool bc_surjection = true;  // H_BC -> E_{r,BC}
  bool a_injection = true;    // E_{r,A} -> H_A
  std::vector<std::string> failures;
};

namespace detail {

inline Matrix class_map(const QuotientBasis& src, const QuotientBasis& tgt) {
  return tgt.coordinates(src.representatives());
}

}  // namespace detail

inline CanonicalMaps canonical_maps(const DoubleComplex& c, int r) {
  ensure_valid(c);
  if (r < 1) throw InvalidInput("canonical_maps: r must be at least 1");
  const DoubleComplex sw = swapped(c);
  const TotalComplex t = total_complex(c);
  const auto dr = de_rham_bases(t);
  CanonicalMaps out;
  out.r = r;
  for (const auto& [p, q] : c.bidegrees()) {
    if (c.dim(p, q) == 0) continue;
    const QuotientBasis bc = bc_basis(c, sw, r, p, q);
    const QuotientBasis a = a_basis(c, sw, r, p, q);
    const QuotientBasis er = page_basis(c, r, p, q);
    const QuotientBasis ebar(detail::z_space(sw, r, q, p), detail::c_space(sw, r, q, p));
    const QuotientBasis& h = dr[static_cast<std::size_t>(p + q)];
    BidegreeMaps m;
    m.at = {p, q};
    m.bc_to_er = detail::class_map(bc, er);
    m.bc_to_ebar = detail::class_map(bc, ebar);
    m.bc_to_a = detail::class_map(bc, a);
    m.er_to_a = detail::class_map(er, a);
    m.ebar_to_a = detail::class_map(ebar, a);
    m.bc_to_dr = Matrix(h.dim(), bc.dim());
    for (std::size_t j = 0; j < bc.dim(); ++j)
      m.bc_to_dr.set_column(j, h.coordinates(embed(t, c, {p, q}, bc.representatives().column(j))));
    m.dr_to_a = Matrix(a.dim(), h.dim());
    for (std::size_t j = 0; j < h.dim(); ++j)
      m.dr_to_a.set_column(j, a.coordinates(component(t, c, {p, q}, h.representatives().column(j))));

    const std::string where = " at (" + to_string(Bidegree{p, q}) + ")";
    if (!(m.er_to_a * m.bc_to_er == m.bc_to_a) || !(m.ebar_to_a * m.bc_to_ebar == m.bc_to_a) ||
        !(m.dr_to_a * m.bc_to_dr == m.bc_to_a)) {
      out.commutes = false;
      out.failures.push_back("diagram does not commute" + where);
    }
    // E_{1,BC} -> E_{r,BC} is onto iff D_1 ⊆ D_r; E_{r,A} -> E_{1,A} is into iff the closed spaces nest.
    if (!detail::ererbar_exact(c, sw, r, p, q).contains(detail::ererbar_exact(c, sw, 1, p, q))) {
      out.bc_surjection = false;
      out.failures.push_back("H_BC -> E_r,BC not surjective" + where);
    }
    if (!detail::ererbar_closed(c, sw, 1, p, q).contains(detail::ererbar_closed(c, sw, r, p, q))) {
      out.a_injection = false;
      out.failures.push_back("E_r,A -> H_A not injective" + where);
    }
    out.maps.push_back(std::move(m));
  }
  return out;
}

struct Witness {
  Bidegree at;
  Vector form;
  std::string description;
};

struct PageDdbarVerdict {
  int r = 0;
  bool verdict = false;  // the page-(r-1) property, decided by (B)
  bool b_iso = false;
  bool c_dims = false;
  bool d_injective = false;
  bool e_exactness = false;
  std::optional<bool> f_identities;  // stated for r >= 2
  std::optional<bool> structure;     // filled by the zigzag module
  std::vector<std::string> failures;
  std::optional<Witness> witness;

  // (C), (D) and (E) follow from (B) unconditionally; the converses need
  // structure an abstract complex may lack.  A perfect pairing restores
  // (D) => (B) but not (C) => (B): an odd-L and an odd-M zigzag in the same
  // total degree balance the counts.
  bool duality_gap() const { return d_injective && !b_iso; }
  bool count_gap() const { return c_dims && !b_iso; }
};

namespace detail {

inline std::optional<Vector> outside(const Subspace& a, const Subspace& b) {
  for (std::size_t j = 0; j < a.dim(); ++j) {
    Vector v = a.basis().column(j);
    if (!b.contains(v)) return v;
  }
  return std::nullopt;
}

}  // namespace detail

namespace detail {

// Both (F) identities at every bidegree of c; empty when they hold.
inline std::string f_identities_failure(const DoubleComplex& c, const TotalComplex& t, int r) {
  for (const auto& [p, q] : c.bidegrees()) {
    if (c.dim(p, q) == 0) continue;
    // (i) lives in A^{p+1,q}: Im d1 d2 versus d1(Z_r^{p,q}).
    const Subspace ddbar = image_basis(c.d1(p, q) * c.d2(p, q - 1));
    const Subspace dz = image_of(c.d1(p, q), z_space(c, r, p, q));
    if (!(ddbar == dz)) return "(F)(i) fails at (" + to_string(Bidegree{p, q}) + ")";
    const Subspace kc = subspace_intersection(closed_space(c, p, q), c_space(c, r, p, q));
    if (!(kc == pure_exact_space(t, c, {p, q}))) return "(F)(ii) fails at (" + to_string(Bidegree{p, q}) + ")";
  }
  return {};
}

}  // namespace detail

inline void check_verdict_consistency(const PageDdbarVerdict& v) {
  std::string bad;
  if (v.b_iso && !v.c_dims) bad += " (B) without (C)";
  if (v.d_injective != v.e_exactness) bad += " (D)!=(E)";
  if (v.b_iso && !v.d_injective) bad += " (B) without (D)";
  if (v.r >= 2 && v.f_identities && *v.f_identities != v.b_iso) bad += " (F)!=(B)";
  if (v.structure && *v.structure != v.b_iso) bad += " structure!=(B)";
  if (!bad.empty()) throw ConsistencyError("page verdict criteria disagree at r=" + std::to_string(v.r) + ":" + bad);
}

inline PageDdbarVerdict page_ddbar_verdict(const DoubleComplex& c, int r, bool check = true) {
  ensure_valid(c);
  if (r < 1) throw InvalidInput("page_ddbar_verdict: r must be at least 1");
  const DoubleComplex sw = swapped(c);
  const TotalComplex t = total_complex(c);
  const CanonicalMaps maps = canonical_maps(c, r);
  PageDdbarVerdict v;
  v.r = r;
  v.b_iso = true;
  v.d_injective = true;
  v.e_exactness = true;
  v.f_identities = true;

  std::vector<std::size_t> bc_k(t.degrees()), a_k(t.degrees());
  for (const auto& m : maps.maps) {
    const std::size_t nbc = m.bc_to_a.cols(), na = m.bc_to_a.rows();
    const std::size_t rk = rank(m.bc_to_a);
    bc_k[static_cast<std::size_t>(m.at.p + m.at.q)] += nbc;
    a_k[static_cast<std::size_t>(m.at.p + m.at.q)] += na;
    const std::string where = "(" + to_string(m.at) + ")";
    if (!(nbc == na && rk == nbc)) {
      v.b_iso = false;
      v.failures.push_back("(B) BC->A not an isomorphism at " + where);
    }
    if (rk != nbc) {
      v.d_injective = false;
      v.failures.push_back("(D) BC->A not injective at " + where);
    }
  }
  v.c_dims = bc_k == a_k;
  if (!v.c_dims) v.failures.push_back("(C) antidiagonal dimensions differ");

  for (const auto& [p, q] : c.bidegrees()) {
    if (c.dim(p, q) == 0) continue;
    const std::string where = "(" + to_string(Bidegree{p, q}) + ")";
    const Subspace k = closed_space(c, p, q);
    const Subspace exact = pure_exact_space(t, c, {p, q});
    const Subspace cr = detail::c_space(c, r, p, q);
    const Subspace kc = subspace_intersection(k, cr);
    const Subspace kcbar = subspace_intersection(k, detail::c_space(sw, r, q, p));
    const Subspace dr = detail::ererbar_exact(c, sw, r, p, q);
    if (!(exact == kc && kc == kcbar && kcbar == dr)) {
      v.e_exactness = false;
      v.failures.push_back("(E) exactness notions differ at " + where);
      if (!v.witness) {
        if (auto w = detail::outside(kc, exact))
          v.witness = Witness{{p, q}, *w, "d-closed, E_r-exact, not d-exact"};
        else if (auto w2 = detail::outside(exact, dr))
          v.witness = Witness{{p, q}, *w2, "d-exact, not E_rEbar_r-exact"};
        else if (auto w3 = detail::outside(kcbar, exact))
          v.witness = Witness{{p, q}, *w3, "d-closed, Ebar_r-exact, not d-exact"};
        else if (auto w4 = detail::outside(kc, dr))
          v.witness = Witness{{p, q}, *w4, "d-closed, E_r-exact, not E_rEbar_r-exact"};
      }
    }
  }
  // (B) can fail with (E) intact; then exhibit an Aeppli class no d-closed form hits.
  if (!v.witness && !v.b_iso)
    for (const auto& m : maps.maps) {
      if (rank(m.bc_to_a) == m.bc_to_a.rows()) continue;
      const auto [p, q] = m.at;
      const Subspace hit = subspace_sum(closed_space(c, p, q), sum_of_images(c, p, q));
      if (auto w = detail::outside(detail::ererbar_closed(c, sw, r, p, q), hit)) {
        v.witness = Witness{m.at, *w, "E_rEbar_r-closed, Aeppli class not represented by a d-closed form"};
        break;
      }
    }
  const std::string f_fail = detail::f_identities_failure(c, t, r);
  const std::string f_fail_bar = detail::f_identities_failure(sw, total_complex(sw), r);
  v.f_identities = f_fail.empty() && f_fail_bar.empty();
  if (!f_fail.empty()) v.failures.push_back(f_fail);
  if (!f_fail_bar.empty()) v.failures.push_back(f_fail_bar + " (d1, d2 exchanged)");
  v.verdict = v.b_iso;
  if (check) check_verdict_consistency(v);
  return v;
}

struct InequalityReport {
  int r = 0;
  std::size_t bc_plus_a = 0;
  std::size_t e_plus_ebar = 0;
  std::size_t twice_betti = 0;
  bool chain_holds = false;
  bool verdict = false;
  bool outer_equal = false;
  bool ok = false;  // chain holds, and outer terms agree when the verdict is true
};

inline InequalityReport inequality_check(const DoubleComplex& c, int r) {
  ensure_valid(c);
  if (r < 1) throw InvalidInput("inequality_check: r must be at least 1");
  InequalityReport rep;
  rep.r = r;
  const BcaTable b = bca_dims(c, r);
  const PageTable pg = page_dims(c, r);
  rep.bc_plus_a = b.bc[static_cast<std::size_t>(r - 1)].total() + b.a[static_cast<std::size_t>(r - 1)].total();
  rep.e_plus_ebar = pg.e[static_cast<std::size_t>(r - 1)].total() + pg.ebar[static_cast<std::size_t>(r - 1)].total();
  for (auto x : de_rham_dims(total_complex(c))) rep.twice_betti += 2 * x;
  rep.chain_holds = rep.bc_plus_a >= rep.e_plus_ebar && rep.e_plus_ebar >= rep.twice_betti;
  rep.verdict = page_ddbar_verdict(c, r, false).verdict;
  rep.outer_equal = rep.bc_plus_a == rep.twice_betti;
  rep.ok = rep.chain_holds && (!rep.verdict || rep.outer_equal);
  return rep;
}

}  // namespace ddbar
