#include <catch_amalgamated.hpp>

#include "ddbar/bca.hpp"
#include "ddbar/models.hpp"
#include "ddbar/shapes.hpp"

using namespace ddbar;

namespace {

std::size_t label_index(const DoubleComplex& c, int p, int q, const std::string& label) {
  const auto& l = c.labels(p, q);
  auto it = std::find(l.begin(), l.end(), label);
  REQUIRE(it != l.end());
  return static_cast<std::size_t>(it - l.begin());
}

Vector unit(std::size_t n, std::size_t i) {
  Vector v(n, 0);
  v[i] = 1;
  return v;
}

CdgaSpec two_odd(int u) {
  CdgaSpec s;
  s.generators = {{"x01", {0, 1}}, {"y", {u + 1, u}}};
  s.truncation.max_p = 10;
  s.truncation.max_q = 10;
  return s;
}

}  // namespace

TEST_CASE("squares", "[models]") {
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) {
      const DoubleComplex c = build_square(p, q);
      CHECK(validate(c).ok());
      CHECK(c.total_dim() == 4);
      CHECK(!(c.d1(p, q + 1) * c.d2(p, q)).is_zero());
    }
  const DoubleComplex sq = build_square(0, 0);
  const PageTable pt = page_dims(sq, 4);
  const BcaTable bt = bca_dims(sq, 4);
  for (int r = 1; r <= 4; ++r) {
    CHECK(pt.e[r - 1].total() == 0);
    CHECK(bt.bc[r - 1].total() == 0);
    CHECK(bt.a[r - 1].total() == 0);
  }
  for (auto b : de_rham_dims(total_complex(sq))) CHECK(b == 0);
  CHECK_THROWS_AS(build_square(1, 1, Grid{2, 2}), InvalidInput);
}

TEST_CASE("zigzags", "[models]") {
  const DoubleComplex dot = build_zigzag(ZigzagShape{{1, 1}, 1, false, false});
  const BcaTable bd = bca_dims(dot, 4);
  for (int r = 1; r <= 4; ++r) {
    CHECK(bd.bc_at(r, 1, 1) == 1);
    CHECK(bd.a_at(r, 1, 1) == 1);
  }

  // one generator with both outer arrows
  const ZigzagShape l3{{0, 1}, 1, true, true};
  CHECK(l3.length() == 3);
  CHECK(l3.type() == "odd-L");
  const BcaTable b3 = bca_dims(build_zigzag(l3), 2);
  CHECK(b3.bc[1].total() == 2);
  CHECK(b3.a[1].total() == 0);

  // even length 4 = 2l with l = 2
  const ZigzagShape z4{{0, 2}, 2, false, true};
  CHECK(z4.length() == 4);
  const BcaTable b4 = bca_dims(build_zigzag(z4), 3);
  CHECK(b4.bc[1].total() == 1);
  CHECK(b4.a[1].total() == 1);
  CHECK(b4.bc[2].total() == 0);
  CHECK(b4.a[2].total() == 0);

  for (int g = 1; g <= 4; ++g)
    for (int lf = 0; lf < 2; ++lf)
      for (int rt = 0; rt < 2; ++rt) {
        const ZigzagShape z{{0, g}, g, lf == 1, rt == 1};
        const DoubleComplex c = build_zigzag(z);
        CHECK(validate(c).ok());
        CHECK(c.total_dim() == static_cast<std::size_t>(z.length()));
        CHECK(shape_dim(z) == static_cast<std::size_t>(z.length()));
      }
  CHECK_THROWS_AS(ZigzagShape::from_generators({{0, 2}, {1, 2}}, false, false), InvalidInput);
  CHECK(ZigzagShape::from_generators({{0, 2}, {1, 1}, {2, 0}}, true, false).length() == 6);
  CHECK_THROWS_AS(build_zigzag(ZigzagShape{{0, 0}, 2, false, false}), InvalidInput);
}

TEST_CASE("expression parser", "[models]") {
  CdgaSpec s = calabi_eckmann_spec(1, 1, 8);
  const std::size_t x01 = *s.index_of("x01"), x11 = *s.index_of("x11");

  const Polynomial sq = parse_expression("x11^2", s);
  REQUIRE(sq.size() == 1);
  CHECK(sq.begin()->first[x11] == 2);
  CHECK(sq.begin()->second == 1);
  CHECK(parse_expression("x01*x01", s).empty());
  CHECK(parse_expression("x01^2", s).empty());
  CHECK(parse_expression("2*x11 - x11 - x11", s).empty());
  CHECK(parse_expression(" 1/2*x01*x11 + x11*x01 ", s).begin()->second == Rational(3, 2));
  CHECK(parse_expression("(x11 + x01)^2", s).size() == 2);  // x11^2 + 2 x01 x11 with the odd square gone
  CHECK(parse_expression("(x11 + x01)^2", s).at([&] {
    Monomial m(s.generators.size(), 0);
    m[x01] = 1;
    m[x11] = 1;
    return m;
  }()) == 2);

  auto position_of = [&](const std::string& src) -> std::size_t {
    try {
      parse_expression(src, s);
    } catch (const ParseError& e) {
      return e.position;
    }
    return std::string::npos;
  };
  CHECK(position_of("x11 + ") == 6);
  CHECK(position_of("x11 * z") == 6);
  CHECK(position_of("x11^-1") == 4);
  CHECK(position_of("x11)") == 3);
  CHECK(position_of("1/0*x11") == 0);
  CHECK(position_of("x11 x01") == 4);
}

TEST_CASE("Koszul signs", "[models]") {
  for (int u = 0; u <= 3; ++u) {
    const CdgaSpec s = two_odd(u);
    // sign of moving y (degree 2u+1) past x01 (degree 1)
    const int deg_y = 2 * u + 1, deg_x = 1;
    const int sign = (deg_y * deg_x) % 2 ? -1 : 1;
    const Polynomial lhs = parse_expression("y*x01", s), rhs = parse_expression("x01*y", s);
    REQUIRE(lhs.size() == 1);
    CHECK(lhs.begin()->second == sign * rhs.begin()->second);
  }
  // even generators commute
  CdgaSpec e;
  e.generators = {{"a", {1, 1}}, {"b", {0, 2}}, {"c", {0, 1}}};
  CHECK(parse_expression("b*a", e) == parse_expression("a*b", e));
  CHECK(parse_expression("c*b*a", e) == parse_expression("a*b*c", e));
}

TEST_CASE("parser round trip", "[models]") {
  const CdgaSpec s = calabi_eckmann_spec(2, 3, 12);
  for (const std::string src : {"x11^3", "-x01*x11 + 2/3*y32*x43", "x43*y32*x01", "0", "1 - x11^2*x01 + 5",
                                "(x01 + x11)*(y32 - x43)"}) {
    const Polynomial p = parse_expression(src, s);
    CHECK(parse_expression(to_string(p, s), s) == p);
  }
}

TEST_CASE("CDGA construction", "[models]") {
  CdgaSpec powers;
  powers.generators = {{"x", {1, 1}}};
  powers.truncation.max_p = 3;
  powers.truncation.max_q = 3;
  const DoubleComplex c = build_cdga(powers);
  CHECK(validate(c).ok());
  CHECK(c.total_dim() == 4);
  for (int k = 0; k <= 3; ++k) CHECK(c.dim(k, k) == 1);
  CHECK(c.labels(2, 2)[0] == "x^2");

  CdgaSpec bad = powers;
  bad.d1_rules["x"] = "x";
  CHECK_THROWS_AS(build_cdga(bad), InvalidInput);
  CdgaSpec undeclared = powers;
  undeclared.d2_rules["x"] = "q";
  CHECK_THROWS(build_cdga(undeclared));
  // lowering the weight makes the discarded span unstable
  CdgaSpec unstable;
  unstable.generators = {{"a", {0, 1}}, {"b", {1, 1}}};
  unstable.d1_rules["a"] = "b";
  unstable.truncation = {5, 5, {{"a", 2}, {"b", 1}}, 3};
  CHECK_THROWS_AS(build_cdga(unstable), InvalidInput);
}

TEST_CASE("Calabi-Eckmann model", "[models]") {
  const CdgaSpec s = calabi_eckmann_spec(1, 1, 8);
  REQUIRE(s.generators.size() == 4);
  CHECK(s.generators[2].name == "y21");
  CHECK(s.generators[3].name == "x21");
  CHECK(s.d2_rules.at("y21") == "x11^2");
  CHECK(s.d1_rules.at("x01") == "x11");

  const CalabiEckmannModel m = example_calabi_eckmann(1, 1);
  const DoubleComplex& c = m.complex;
  CHECK(validate(c).ok());
  CHECK(m.W == 8);
  CHECK(m.certified_max_p == 5);

  // Dolbeault cohomology H^{2,2} = <x01 x21>, H^{3,2} = <x11 x21>
  const PageTable pt = page_dims(c, 2);
  CHECK(pt.at(1, 2, 2) == 1);
  CHECK(pt.at(1, 3, 2) == 1);
  const Subspace z22 = kernel_basis(c.d2(2, 2)), b22 = image_basis(c.d2(2, 1));
  const Vector a = unit(c.dim(2, 2), label_index(c, 2, 2, "x01*x21"));
  CHECK(z22.contains(a));
  CHECK_FALSE(subspace_sum(b22, Subspace::span(Matrix::column_vector(a))) == b22);
  const Subspace z32 = kernel_basis(c.d2(3, 2)), b32 = image_basis(c.d2(3, 1));
  const Vector b = unit(c.dim(3, 2), label_index(c, 3, 2, "x11*x21"));
  CHECK(z32.contains(b));
  CHECK_FALSE(b32.contains(b));

  CHECK(pt.at(1, 3, 2) == 1);
  CHECK(pt.at(2, 3, 2) == 0);
  CHECK(degeneration_page(c) == 2);

  const CalabiEckmannModel hopf = example_calabi_eckmann(0, 1);
  CHECK(degeneration_page(hopf.complex) == 1);
  const PageTable ph = page_dims(hopf.complex, 4);
  for (int r = 1; r <= 4; ++r) CHECK(ph.at(r, 2, 1) == 1);

  CHECK_THROWS_AS(example_calabi_eckmann(1, 1, 4), InvalidInput);
  CHECK_THROWS_AS(example_calabi_eckmann(2, 1), InvalidInput);
}

TEST_CASE("Calabi-Eckmann truncation stability", "[models]") {
  for (auto [u, v] : {std::pair{0, 1}, std::pair{1, 1}}) {
    const int W = calabi_eckmann_default_weight(u, v);
    const auto lo = example_calabi_eckmann(u, v, W), hi = example_calabi_eckmann(u, v, W + 1);
    const int cut = lo.certified_max_p;
    const PageTable a = page_dims(lo.complex, 3), b = page_dims(hi.complex, 3);
    for (int r = 1; r <= 3; ++r)
      for (int p = 0; p <= cut; ++p)
        for (int q = 0; q < hi.complex.grid().Q; ++q) {
          INFO("u=" << u << " r=" << r << " (" << p << "," << q << ")");
          CHECK(a.at(r, p, q) == b.at(r, p, q));
          CHECK(a.bar_at(r, p, q) == b.bar_at(r, p, q));
        }
  }
}
