#include <catch_amalgamated.hpp>

#include <random>

#include "ddbar/pairing.hpp"
#include "ddbar/random.hpp"

using namespace ddbar;

namespace {

// The same pairing written in the basis given by the columns of t.
DualityPairing transported(const DualityPairing& pr, const BasisChange& t) {
  DualityPairing out = pr;
  for (auto& [b, m] : out.pairs) m = t.at(b).transpose() * m * t.at(pr.partner(b));
  return out;
}

}  // namespace

TEST_CASE("validating pairings", "[pairing]") {
  const Grid g{2, 2};
  const DoubleComplex two = direct_sum(build_zigzag(ZigzagShape{{0, 0}, 1, false, false}, g),
                                       build_zigzag(ZigzagShape{{1, 1}, 1, false, false}, g));
  DualityPairing pr;
  pr.top = {1, 1};
  pr.pairs[{0, 0}] = Matrix::identity(1);
  pr.pairs[{1, 1}] = Matrix::identity(1);
  const PairingReport ok = validate_pairing(two, pr);
  CHECK(ok.valid);
  CHECK(ok.perfect);
  CHECK(ok.graded_symmetric);
  CHECK(ok.violations.empty());

  DualityPairing wrong_shape = pr;
  wrong_shape.pairs[{0, 0}] = Matrix::identity(2);
  CHECK_FALSE(validate_pairing(two, wrong_shape).valid);

  DualityPairing half = pr;
  half.pairs.erase({1, 1});
  const PairingReport h = validate_pairing(two, half);
  CHECK(h.valid);
  CHECK_FALSE(h.perfect);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const PairedComplex pc = with_dual(random_complex(Grid{3, 3}, 2, seed));
    CHECK(validate(pc.complex).ok());
    const PairingReport rep = validate_pairing(pc.complex, pc.pairing);
    CHECK(rep.valid);
    CHECK(rep.perfect);
    CHECK(rep.graded_symmetric);
  }

  PairedComplex sq = with_dual(build_square(0, 0));
  sq.pairing.pairs[{0, 0}] = Rational(-1) * sq.pairing.pairs[{0, 0}];
  const PairingReport flipped = validate_pairing(sq.complex, sq.pairing);
  CHECK_FALSE(flipped.valid);
  CHECK_FALSE(flipped.violations.empty());
}

TEST_CASE("induced pairings on pages and Bott-Chern x Aeppli", "[pairing]") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const PairedComplex pc = with_dual(random_complex(Grid{3, 3}, 2, seed));
    const DoubleComplex& c = pc.complex;
    for (int r = 1; r <= 3; ++r)
      for (const auto& [p, q] : c.bidegrees()) {
        INFO("seed " << seed << " r=" << r << " (" << p << "," << q << ")");
        const InducedPairing e = induced_pairing_er(c, pc.pairing, r, p, q);
        CHECK(e.well_defined);
        CHECK(e.nondegenerate);
        const InducedPairing ba = induced_pairing_bc_a(c, pc.pairing, r, p, q);
        CHECK(ba.well_defined);
        CHECK(ba.nondegenerate);
      }
  }
}

TEST_CASE("Bott-Chern self-pairing tracks the page verdict", "[pairing]") {
  const PairedComplex z4 = with_dual(build_zigzag(ZigzagShape{{0, 2}, 2, false, true}));
  const BcBcReport r2 = induced_pairing_bc_bc(z4.complex, z4.pairing, 2);
  CHECK_FALSE(r2.nondegenerate);
  CHECK_FALSE(r2.verdict);
  CHECK(r2.agrees);
  const BcBcReport r3 = induced_pairing_bc_bc(z4.complex, z4.pairing, 3);
  CHECK(r3.nondegenerate);
  CHECK(r3.verdict);
  for (const auto& b : r3.blocks) CHECK(b.well_defined);

  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    const PairedComplex pc = with_dual(random_complex(Grid{3, 3}, 2, seed));
    for (int r = 1; r <= 3; ++r) CHECK(induced_pairing_bc_bc(pc.complex, pc.pairing, r).agrees);
  }
}

TEST_CASE("pairings survive a change of basis", "[pairing]") {
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 40; seed < 46; ++seed) {
    const PairedComplex pc = with_dual(random_complex(Grid{3, 3}, 2, seed));
    const BasisChange t = random_basis_change(pc.complex, rng);
    const DoubleComplex c = change_of_basis(pc.complex, t);
    const DualityPairing pr = transported(pc.pairing, t);
    const PairingReport rep = validate_pairing(c, pr);
    CHECK(rep.valid);
    CHECK(rep.perfect);
    CHECK(rep.graded_symmetric);
    for (int r = 1; r <= 3; ++r) {
      for (const auto& [p, q] : c.bidegrees()) {
        const InducedPairing a = induced_pairing_er(pc.complex, pc.pairing, r, p, q);
        const InducedPairing b = induced_pairing_er(c, pr, r, p, q);
        CHECK(rank(a.gram) == rank(b.gram));
        CHECK(b.nondegenerate);
      }
      CHECK(induced_pairing_bc_bc(c, pr, r).nondegenerate == induced_pairing_bc_bc(pc.complex, pc.pairing, r).nondegenerate);
    }
  }
}
