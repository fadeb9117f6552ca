#include <catch_amalgamated.hpp>

#include <random>

#include "ddbar/random.hpp"
#include "ddbar/zigzag.hpp"

using namespace ddbar;

namespace {

std::vector<long> predicted_sum(const ShapeInventory& inv, Grid g, int r_max) {
  std::vector<long> total = detail::empty_invariants(g, r_max).flatten();
  for (const auto& e : inv.entries) {
    const auto v = predicted_invariants(e.shape, g, r_max).flatten();
    for (std::size_t i = 0; i < v.size(); ++i) total[i] += static_cast<long>(e.multiplicity) * v[i];
  }
  return total;
}

DoubleComplex sum_of(const std::vector<Shape>& blocks, Grid g) {
  DoubleComplex c(g);
  for (const auto& s : blocks) c = direct_sum(c, build_shape(s, g));
  return c;
}

}  // namespace

TEST_CASE("shape enumeration", "[zigzag]") {
  const auto one = enumerate_shapes(Grid{1, 1});
  REQUIRE(one.size() == 1);
  REQUIRE(std::holds_alternative<ZigzagShape>(one[0]));
  CHECK(std::get<ZigzagShape>(one[0]).is_dot());

  // 2x2 by hand: one square, four dots, two with only the left arrow, two
  // with only the right arrow, one with both, one with two generators
  const auto two = enumerate_shapes(Grid{2, 2});
  CHECK(two.size() == 11);
  std::size_t squares = 0;
  for (const auto& s : two) {
    CHECK(fits(s, Grid{2, 2}));
    if (std::holds_alternative<Square>(s)) ++squares;
  }
  CHECK(squares == 1);
  for (std::size_t i = 1; i < two.size(); ++i) CHECK_FALSE(shape_less(two[i], two[i - 1]));
}

TEST_CASE("predicted invariants match measured ones", "[zigzag]") {
  const Grid g{6, 6};
  const int r_max = 4;
  std::size_t tried = 0;
  for (const auto& s : enumerate_shapes(g)) {
    if (const auto* z = std::get_if<ZigzagShape>(&s); z && z->length() > 8) continue;
    INFO(describe(s));
    CHECK(predicted_invariants(s, g, r_max) == measured_invariants(build_shape(s, g), r_max));
    ++tried;
  }
  CHECK(tried > 100);

  // even, three generators: survives page 3 at both ends and dies on page 4
  const ZigzagShape z6{{0, 3}, 3, false, true};
  const Invariants inv = predicted_invariants(z6, g, 4);
  CHECK(inv.e[2].total() == 2);
  CHECK(inv.e[3].total() == 0);
  CHECK(inv == measured_invariants(build_zigzag(z6, g), 4));
}

TEST_CASE("multiplicities of small sums", "[zigzag]") {
  const Grid g{3, 3};
  const MultiplicityResult sq = multiplicity_solve(build_square(0, 0, g));
  REQUIRE(sq.status == SolveStatus::Unique);
  CHECK(sq.inventory == make_inventory({Square{{0, 0}}}));

  const Shape dot = ZigzagShape{{1, 1}, 1, false, false};
  const MultiplicityResult dd = multiplicity_solve(sum_of({dot, dot}, g));
  REQUIRE(dd.status == SolveStatus::Unique);
  REQUIRE(dd.inventory.entries.size() == 1);
  CHECK(dd.inventory.entries[0].multiplicity == 2);
  CHECK(dd.inventory.count() == 2);

  const MultiplicityResult zero = multiplicity_solve(DoubleComplex(g));
  CHECK(zero.status == SolveStatus::Unique);
  CHECK(zero.inventory.entries.empty());
}

TEST_CASE("multiplicities of scrambled random sums", "[zigzag]") {
  const Grid g{4, 4};
  std::size_t unique = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const RandomComplex rc = random_direct_sum(g, 2, 4, seed);
    const MultiplicityResult m = multiplicity_solve(rc.complex);
    const std::vector<long> want = measured_invariants(rc.complex, g.diameter()).flatten();
    INFO("seed " << seed);
    CHECK_FALSE(m.search_truncated);
    if (m.status == SolveStatus::Unique) {
      ++unique;
      CHECK(m.inventory == make_inventory(rc.summands));
      CHECK(predicted_sum(m.inventory, g, g.diameter()) == want);
    } else {
      CHECK(m.solution_space_dim > 0);
      REQUIRE(m.alternatives.size() >= 2);
      for (const auto& alt : m.alternatives) CHECK(predicted_sum(alt, g, g.diameter()) == want);
    }
  }
  CHECK(unique > 0);
}

TEST_CASE("decomposition certificates", "[zigzag]") {
  const Grid g{4, 4};
  const std::vector<Shape> blocks = {ZigzagShape{{0, 2}, 2, false, true}, Square{{1, 1}},
                                     ZigzagShape{{1, 2}, 1, false, false}, ZigzagShape{{0, 1}, 1, true, true}};
  const DoubleComplex plain = sum_of(blocks, g);
  const CertificateReport r0 = verify_certificate(plain, certificate_for_sum(blocks));
  CHECK(r0.ok);
  CHECK(r0.failure.empty());

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const BasisChange s = random_basis_change(plain, rng);
    const DoubleComplex scrambled = change_of_basis(plain, s);
    CHECK(verify_certificate(scrambled, certificate_for_sum(blocks, s)).ok);
    if (trial == 0) CHECK_FALSE(verify_certificate(scrambled, certificate_for_sum(blocks)).ok);
  }

  // claim the even zigzag has no right arrow
  std::vector<Shape> wrong = blocks;
  wrong[0] = ZigzagShape{{0, 2}, 2, false, false};
  const CertificateReport bad = verify_certificate(plain, certificate_for_sum(wrong));
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.failure.empty());

  DecompositionCertificate missing = certificate_for_sum(blocks);
  missing.assignment.erase(missing.assignment.begin());
  CHECK_FALSE(verify_certificate(plain, missing).ok);
}

TEST_CASE("structure verdict", "[zigzag]") {
  const ShapeInventory z4 = make_inventory({ZigzagShape{{0, 2}, 2, false, true}});
  CHECK_FALSE(structure_verdict(z4, 2));
  CHECK(structure_verdict(z4, 3));
  CHECK(structure_verdict(make_inventory({Square{{0, 0}}, ZigzagShape{{1, 1}, 1, false, false}}), 1));
  CHECK_FALSE(structure_verdict(make_inventory({ZigzagShape{{0, 1}, 1, true, true}}), 5));
  CHECK_FALSE(structure_verdict(make_inventory({ZigzagShape{{0, 1}, 2, false, false}}), 5));

  const DoubleComplex c = build_zigzag(ZigzagShape{{0, 2}, 2, false, true});
  CHECK(structure_verdict(c, 2) == std::optional<bool>(false));
  CHECK(structure_verdict(c, 3) == std::optional<bool>(true));

  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const DoubleComplex rc = random_direct_sum(Grid{4, 4}, 2, 3, seed).complex;
    for (int r = 1; r <= 4; ++r) {
      INFO("seed " << seed << " r=" << r);
      const PageDdbarVerdict v = full_page_verdict(rc, r);
      if (v.structure) CHECK(*v.structure == v.verdict);
    }
  }
}
