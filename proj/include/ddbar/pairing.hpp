#pragma once

// Bilinear pairings A^{p,q} x A^{n1-p,n2-q} -> Q compatible with both
// differentials, and the pairings they induce on E_r, BC x A and BC x BC.

#include <map>
#include <string>
#include <vector>

#include "ddbar/bca.hpp"

namespace ddbar {

struct DualityPairing {
  Bidegree top;                      // (n1, n2)
  std::map<Bidegree, Matrix> pairs;  // (p,q) -> dim(p,q) x dim(top - (p,q))

  Bidegree partner(Bidegree b) const { return {top.p - b.p, top.q - b.q}; }
  Matrix at(const DoubleComplex& c, Bidegree b) const {
    auto it = pairs.find(b);
    if (it == pairs.end()) return Matrix(c.dim(b), c.dim(partner(b)));
    return it->second;
  }
};

inline int degree_sign(int k) { return k % 2 == 0 ? 1 : -1; }

struct PairingReport {
  bool valid = true;              // shapes and both compatibility identities
  bool perfect = true;            // every block square and invertible
  bool graded_symmetric = true;   // P^{n-b} = (-1)^{|a||b|} (P^b)^T
  std::vector<std::string> violations;
};

inline PairingReport validate_pairing(const DoubleComplex& c, const DualityPairing& pr) {
  PairingReport rep;
  for (const auto& [b, m] : pr.pairs) {
    if (!c.grid().contains(b.p, b.q)) {
      rep.valid = false;
      rep.violations.push_back("pairing block given outside the grid at (" + to_string(b) + ")");
      continue;
    }
    if (m.rows() != c.dim(b) || m.cols() != c.dim(pr.partner(b))) {
      rep.valid = false;
      rep.violations.push_back("pairing block at (" + to_string(b) + ") has the wrong shape");
    }
  }
  if (!rep.valid) {
    rep.perfect = rep.graded_symmetric = false;
    return rep;
  }
  for (const auto& [p, q] : c.bidegrees()) {
    const Bidegree b{p, q};
    const int s = degree_sign(p + q);
    // P(d1 a, x) + (-1)^{|a|} P(a, d1 x) = 0 with a in (p,q), x in top - (p+1,q).
    const Bidegree x1 = pr.partner({p + 1, q});
    const Matrix lhs1 = c.d1(p, q).transpose() * pr.at(c, {p + 1, q}) +
                        Rational(s) * pr.at(c, b) * c.d1(x1.p, x1.q);
    if (!lhs1.is_zero()) {
      rep.valid = false;
      rep.violations.push_back("d1 compatibility fails for (" + to_string(b) + ") x (" + to_string(x1) + ")");
    }
    const Bidegree x2 = pr.partner({p, q + 1});
    const Matrix lhs2 = c.d2(p, q).transpose() * pr.at(c, {p, q + 1}) +
                        Rational(s) * pr.at(c, b) * c.d2(x2.p, x2.q);
    if (!lhs2.is_zero()) {
      rep.valid = false;
      rep.violations.push_back("d2 compatibility fails for (" + to_string(b) + ") x (" + to_string(x2) + ")");
    }
    const Matrix m = pr.at(c, b);
    if (m.rows() != m.cols() || rank(m) != m.rows()) rep.perfect = false;
    const Bidegree o = pr.partner(b);
    const int t = degree_sign((p + q) * (o.p + o.q));
    if (c.dim(o) > 0 && c.grid().contains(o.p, o.q) && !(pr.at(c, o) == Rational(t) * m.transpose()))
      rep.graded_symmetric = false;
  }
  return rep;
}

// The dual complex on the same grid: (Z^{p,q})^* sits at (P-1-p, Q-1-q) and
// delta = -(-1)^{|z|} d^T with |z| the source degree in Z.
inline DoubleComplex dual_complex(const DoubleComplex& z) {
  const Grid& g = z.grid();
  std::map<Bidegree, std::size_t> dims;
  for (const auto& b : z.bidegrees()) dims[{g.P - 1 - b.p, g.Q - 1 - b.q}] = z.dim(b);
  DoubleComplex d(g, dims);
  for (const auto& [p, q] : z.bidegrees()) {
    const int dp = g.P - 1 - p, dq = g.Q - 1 - q;
    if (g.contains(p - 1, q)) d.set_d1(dp, dq, Rational(-degree_sign(p - 1 + q)) * z.d1(p - 1, q).transpose());
    if (g.contains(p, q - 1)) d.set_d2(dp, dq, Rational(-degree_sign(p + q - 1)) * z.d2(p, q - 1).transpose());
  }
  d.set_name("dual(" + z.name() + ")");
  return d;
}

struct PairedComplex {
  DoubleComplex complex;
  DualityPairing pairing;
};

// Z ⊕ dual(Z) with the evaluation pairing P(z,f) = f(z), P(f,z) = (-1)^{|f||z|} f(z).
inline PairedComplex with_dual(const DoubleComplex& z) {
  const Grid& g = z.grid();
  const DoubleComplex d = dual_complex(z);
  PairedComplex out;
  out.complex = direct_sum(z, d);
  out.complex.set_name(z.name() + " + dual");
  out.pairing.top = {g.P - 1, g.Q - 1};
  for (const auto& b : z.bidegrees()) {
    const Bidegree o = out.pairing.partner(b);
    const std::size_t zb = z.dim(b), db = d.dim(b), zo = z.dim(o), dob = d.dim(o);
    Matrix m(zb + db, zo + dob);
    // Z^b against dual^o = (Z^b)^*.
    for (std::size_t i = 0; i < zb; ++i) m(i, zo + i) = 1;
    // dual^b = (Z^o)^* against Z^o.
    const int s = degree_sign((b.p + b.q) * (o.p + o.q));
    for (std::size_t i = 0; i < db; ++i) m(zb + i, i) = s;
    if (m.rows() > 0 && m.cols() > 0) out.pairing.pairs[b] = std::move(m);
  }
  return out;
}

struct InducedPairing {
  Bidegree at, partner;
  Matrix gram;
  bool well_defined = true;  // exact representatives pair to zero with closed ones
  bool dims_match = false;
  bool nondegenerate = false;
};

namespace detail {

inline bool annihilates(const Matrix& left, const Matrix& p, const Matrix& right) {
  if (left.cols() == 0 || right.cols() == 0) return true;
  return (left.transpose() * p * right).is_zero();
}

inline InducedPairing induced(const DoubleComplex& c, const DualityPairing& pr, Bidegree b, const QuotientBasis& lhs,
                              const Subspace& lhs_zero, const Subspace& lhs_num, const QuotientBasis& rhs,
                              const Subspace& rhs_zero, const Subspace& rhs_num) {
  InducedPairing ip;
  ip.at = b;
  ip.partner = pr.partner(b);
  const Matrix m = pr.at(c, b);
  if (lhs.dim() > 0 && rhs.dim() > 0) ip.gram = lhs.representatives().transpose() * m * rhs.representatives();
  else ip.gram = Matrix(lhs.dim(), rhs.dim());
  ip.well_defined = annihilates(lhs_zero.basis(), m, rhs_num.basis()) && annihilates(lhs_num.basis(), m, rhs_zero.basis());
  ip.dims_match = lhs.dim() == rhs.dim();
  ip.nondegenerate = ip.dims_match && rank(ip.gram) == lhs.dim();
  return ip;
}

}  // namespace detail

inline InducedPairing induced_pairing_er(const DoubleComplex& c, const DualityPairing& pr, int r, int p, int q) {
  const Bidegree b{p, q}, o = pr.partner(b);
  const Subspace z = detail::z_space(c, r, p, q), cr = detail::c_space(c, r, p, q);
  const Subspace zo = detail::z_space(c, r, o.p, o.q), co = detail::c_space(c, r, o.p, o.q);
  return detail::induced(c, pr, b, QuotientBasis(z, cr), cr, z, QuotientBasis(zo, co), co, zo);
}

inline InducedPairing induced_pairing_bc_a(const DoubleComplex& c, const DualityPairing& pr, int r, int p, int q) {
  const DoubleComplex sw = swapped(c);
  const Bidegree b{p, q}, o = pr.partner(b);
  const Subspace k = closed_space(c, p, q), dr = detail::ererbar_exact(c, sw, r, p, q);
  const Subspace cl = detail::ererbar_closed(c, sw, r, o.p, o.q), im = sum_of_images(c, o.p, o.q);
  return detail::induced(c, pr, b, QuotientBasis(k, dr), dr, k, QuotientBasis(cl, im), im, cl);
}

inline InducedPairing induced_pairing_bc_bc_at(const DoubleComplex& c, const DoubleComplex& sw,
                                               const DualityPairing& pr, int r, Bidegree b) {
  const Bidegree o = pr.partner(b);
  const Subspace k = closed_space(c, b.p, b.q), dr = detail::ererbar_exact(c, sw, r, b.p, b.q);
  const Subspace ko = closed_space(c, o.p, o.q), dro = detail::ererbar_exact(c, sw, r, o.p, o.q);
  return detail::induced(c, pr, b, QuotientBasis(k, dr), dr, k, QuotientBasis(ko, dro), dro, ko);
}

struct BcBcReport {
  int r = 0;
  std::vector<InducedPairing> blocks;
  bool nondegenerate = true;
  bool verdict = false;
  bool agrees = false;
};

// Global non-degeneracy of BC x BC compared with the page-(r-1) verdict.
// With check set, a disagreement on a perfect compatible pairing throws.
inline BcBcReport induced_pairing_bc_bc(const DoubleComplex& c, const DualityPairing& pr, int r, bool check = true) {
  ensure_valid(c);
  const DoubleComplex sw = swapped(c);
  BcBcReport rep;
  rep.r = r;
  for (const auto& b : c.bidegrees()) {
    if (c.dim(b) == 0 && c.dim(pr.partner(b)) == 0) continue;
    rep.blocks.push_back(induced_pairing_bc_bc_at(c, sw, pr, r, b));
    if (!rep.blocks.back().nondegenerate) rep.nondegenerate = false;
  }
  rep.verdict = page_ddbar_verdict(c, r, false).verdict;
  rep.agrees = rep.nondegenerate == rep.verdict;
  if (check && !rep.agrees) {
    const PairingReport v = validate_pairing(c, pr);
    if (v.valid && v.perfect)
      throw ConsistencyError("BC x BC non-degeneracy disagrees with the page verdict at r=" + std::to_string(r));
  }
  return rep;
}

}  // namespace ddbar
