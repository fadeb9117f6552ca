#pragma once

// Double complexes from high-level descriptions: shapes (see shapes.hpp) and
// bigraded commutative dgas given by generators, differential rules and a
// truncation.

#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ddbar/bicomplex.hpp"
#include "ddbar/shapes.hpp"

namespace ddbar {

struct Generator {
  std::string name;
  Bidegree bidegree;
  int parity() const noexcept { return (bidegree.p + bidegree.q) % 2; }
};

struct Truncation {
  int max_p = 0;
  int max_q = 0;
  std::map<std::string, int> weights;
  std::optional<int> max_weight;
};

struct CdgaSpec {
  std::vector<Generator> generators;
  std::map<std::string, std::string> d1_rules;
  std::map<std::string, std::string> d2_rules;
  Truncation truncation;

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (generators[i].name == name) return i;
    return std::nullopt;
  }
};

// Exponent per generator in declaration order.
using Monomial = std::vector<int>;
// Normalized: canonical monomials, no zero coefficients.
using Polynomial = std::map<Monomial, Rational>;

inline Bidegree monomial_bidegree(const CdgaSpec& spec, const Monomial& m) {
  Bidegree b{0, 0};
  for (std::size_t i = 0; i < m.size(); ++i) {
    b.p += m[i] * spec.generators[i].bidegree.p;
    b.q += m[i] * spec.generators[i].bidegree.q;
  }
  return b;
}

inline int monomial_weight(const CdgaSpec& spec, const Monomial& m) {
  int w = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto it = spec.truncation.weights.find(spec.generators[i].name);
    if (it != spec.truncation.weights.end()) w += m[i] * it->second;
  }
  return w;
}

// Product of two canonical monomials: +1/-1 sign and the product, or 0 when an
// odd generator would appear twice.  Moving an odd factor of b to the left
// past each larger-index odd factor of a costs one sign.
inline int multiply_monomials(const CdgaSpec& spec, const Monomial& a, const Monomial& b, Monomial& out) {
  const std::size_t n = spec.generators.size();
  out.assign(n, 0);
  int sign = 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (spec.generators[j].parity() == 1) {
      if (a[j] > 0 && b[j] > 0) return 0;
      if (b[j] > 0) {
        int passed = 0;
        for (std::size_t i = j + 1; i < n; ++i)
          if (spec.generators[i].parity() == 1 && a[i] > 0) ++passed;
        if (passed % 2) sign = -sign;
      }
    }
    out[j] = a[j] + b[j];
  }
  return sign;
}

inline void add_term(Polynomial& p, const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = p.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) p.erase(it);
  }
}

inline Polynomial multiply(const CdgaSpec& spec, const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  Monomial m;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      int s = multiply_monomials(spec, ma, mb, m);
      if (s != 0) add_term(out, m, s > 0 ? Rational(ca * cb) : Rational(-ca * cb));
    }
  return out;
}

inline Polynomial monomial_poly(const Monomial& m, const Rational& c = 1) {
  Polynomial p;
  add_term(p, m, c);
  return p;
}

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view src, const CdgaSpec& spec) : src_(src), spec_(spec) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != src_.size()) throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    return p;
  }

 private:
  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  Polynomial one() const { return monomial_poly(Monomial(spec_.generators.size(), 0)); }

  Polynomial expr() {
    Polynomial acc;
    bool first = true;
    for (;;) {
      int sign = 1;
      skip();
      if (peek('+') || peek('-')) {
        sign = src_[pos_] == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        break;
      }
      Polynomial t = term();
      for (const auto& [m, c] : t) add_term(acc, m, sign > 0 ? c : Rational(-c));
      first = false;
      skip();
      if (!(peek('+') || peek('-'))) break;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = factor();
    while (peek('*')) {
      ++pos_;
      acc = multiply(spec_, acc, factor());
    }
    return acc;
  }

  std::string digits() {
    std::size_t b = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return std::string(src_.substr(b, pos_ - b));
  }

  Polynomial factor() {
    skip();
    if (pos_ >= src_.size()) throw ParseError("expected a factor", pos_);
    const char ch = src_[pos_];
    if (ch == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!peek(')')) throw ParseError("expected ')'", pos_);
      ++pos_;
      return power(p);
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      const std::size_t start = pos_;
      std::string num = digits();
      Rational q(Integer(num), 1);
      if (pos_ < src_.size() && src_[pos_] == '/') {
        ++pos_;
        std::string den = digits();
        if (den.empty()) throw ParseError("expected denominator", pos_);
        if (Integer(den) == 0) throw ParseError("zero denominator", start);
        q = Rational(Integer(num), Integer(den));
        q.canonicalize();
      }
      Polynomial p;
      add_term(p, Monomial(spec_.generators.size(), 0), q);
      return p;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      std::string name(src_.substr(start, pos_ - start));
      auto idx = spec_.index_of(name);
      if (!idx) throw ParseError("undeclared name '" + name + "'", start);
      Monomial m(spec_.generators.size(), 0);
      m[*idx] = 1;
      return power(monomial_poly(m));
    }
    throw ParseError("unexpected '" + std::string(1, ch) + "'", pos_);
  }

  Polynomial power(Polynomial base) {
    if (!peek('^')) return base;
    ++pos_;
    skip();
    if (pos_ < src_.size() && src_[pos_] == '-') throw ParseError("negative exponent", pos_);
    const std::size_t at = pos_;
    std::string e = digits();
    if (e.empty()) throw ParseError("expected exponent", at);
    if (e.size() > 6) throw ParseError("exponent too large", at);
    Polynomial acc = one();
    for (int k = std::stoi(e); k > 0; --k) acc = multiply(spec_, acc, base);
    return acc;
  }

  std::string_view src_;
  const CdgaSpec& spec_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse_expression(std::string_view src, const CdgaSpec& spec) {
  return detail::ExprParser(src, spec).parse();
}

inline std::string monomial_to_string(const CdgaSpec& spec, const Monomial& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += spec.generators[i].name;
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

inline std::string to_string(const Polynomial& p, const CdgaSpec& spec) {
  if (p.empty()) return "0";
  std::string s;
  for (const auto& [m, c] : p) {
    const bool neg = sgn(c) < 0;
    Rational a = neg ? Rational(-c) : c;
    if (s.empty())
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    const std::string mono = monomial_to_string(spec, m);
    if (mono == "1")
      s += a.get_str();
    else if (a == 1)
      s += mono;
    else
      s += a.get_str() + "*" + mono;
  }
  return s;
}

// Extend generator images to a derivation of total degree one with the left
// Leibniz rule, expanding the monomial as an ordered product of generators.
inline Polynomial apply_derivation(const CdgaSpec& spec, const std::vector<Polynomial>& images, const Monomial& m) {
  const std::size_t n = spec.generators.size();
  std::vector<std::size_t> factors;
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < m[i]; ++k) factors.push_back(i);
  Polynomial out;
  Monomial prefix(n, 0);
  int prefix_degree = 0;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    const std::size_t g = factors[j];
    if (!images[g].empty()) {
      Monomial suffix(n, 0);
      for (std::size_t k = j + 1; k < factors.size(); ++k) ++suffix[factors[k]];
      Polynomial term = multiply(spec, multiply(spec, monomial_poly(prefix), images[g]), monomial_poly(suffix));
      const Rational s = prefix_degree % 2 ? Rational(-1) : Rational(1);
      for (const auto& [mm, cc] : term) add_term(out, mm, s * cc);
    }
    ++prefix[g];
    prefix_degree += spec.generators[g].bidegree.p + spec.generators[g].bidegree.q;
  }
  return out;
}

namespace detail {

inline std::vector<Polynomial> rule_images(const CdgaSpec& spec, const std::map<std::string, std::string>& rules,
                                           Bidegree shift, const char* which) {
  std::vector<Polynomial> out(spec.generators.size());
  for (const auto& [name, src] : rules) {
    auto idx = spec.index_of(name);
    if (!idx) throw InvalidInput(std::string(which) + " rule for undeclared generator '" + name + "'");
    Polynomial p = parse_expression(src, spec);
    const Bidegree want{spec.generators[*idx].bidegree.p + shift.p, spec.generators[*idx].bidegree.q + shift.q};
    for (const auto& [m, c] : p)
      if (monomial_bidegree(spec, m) != want)
        throw InvalidInput(std::string(which) + " rule violates bidegree: " + name + " -> " + to_string(p, spec) +
                           " contains a term of bidegree (" + to_string(monomial_bidegree(spec, m)) +
                           "), expected (" + to_string(want) + ")");
    out[*idx] = std::move(p);
  }
  return out;
}

}  // namespace detail

struct CdgaComplex {
  DoubleComplex complex;
  std::map<Bidegree, std::vector<Monomial>> basis;
};

// Enumerate the retained monomial basis, extend the rules as derivations and
// keep the quotient by the discarded monomials.  The discarded set must be
// closed under both derivations: the bidegree bounds are automatically, the
// weight bound is when no generator image has smaller weight than the generator.
inline CdgaComplex build_cdga_with_basis(const CdgaSpec& spec) {
  const std::size_t n = spec.generators.size();
  for (const auto& g : spec.generators)
    if (g.bidegree.p < 0 || g.bidegree.q < 0) throw InvalidInput("generator '" + g.name + "' has negative bidegree");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (spec.generators[i].name == spec.generators[j].name)
        throw InvalidInput("generator '" + spec.generators[i].name + "' declared twice");
  for (const auto& [name, w] : spec.truncation.weights) {
    if (!spec.index_of(name)) throw InvalidInput("weight for undeclared generator '" + name + "'");
    if (w < 0) throw InvalidInput("negative weight for '" + name + "'");
  }
  const auto im1 = detail::rule_images(spec, spec.d1_rules, {1, 0}, "d1");
  const auto im2 = detail::rule_images(spec, spec.d2_rules, {0, 1}, "d2");

  const Truncation& tr = spec.truncation;
  if (tr.max_weight) {
    for (std::size_t i = 0; i < n; ++i) {
      Monomial gm(n, 0);
      gm[i] = 1;
      const int wg = monomial_weight(spec, gm);
      for (const auto* im : {&im1[i], &im2[i]})
        for (const auto& [m, c] : *im)
          if (monomial_weight(spec, m) < wg)
            throw InvalidInput("truncation not differential-stable: the image of '" + spec.generators[i].name +
                               "' contains " + monomial_to_string(spec, m) + " of smaller weight");
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = spec.generators[i];
    if (g.parity() == 0 && g.bidegree.p == 0 && g.bidegree.q == 0) {
      Monomial gm(n, 0);
      gm[i] = 1;
      if (!tr.max_weight || monomial_weight(spec, gm) == 0)
        throw InvalidInput("truncation keeps infinitely many powers of '" + g.name + "'");
    }
  }

  std::map<Bidegree, std::vector<Monomial>> basis;
  Monomial cur(n, 0);
  std::function<void(std::size_t, Bidegree, int)> rec = [&](std::size_t i, Bidegree b, int w) {
    if (i == n) {
      basis[b].push_back(cur);
      return;
    }
    const auto& g = spec.generators[i];
    Monomial gm(n, 0);
    gm[i] = 1;
    const int wg = monomial_weight(spec, gm);
    const int cap = g.parity() == 1 ? 1 : 1 << 20;
    for (int e = 0; e <= cap; ++e) {
      Bidegree nb{b.p + e * g.bidegree.p, b.q + e * g.bidegree.q};
      int nw = w + e * wg;
      if (nb.p > tr.max_p || nb.q > tr.max_q) break;
      if (tr.max_weight && nw > *tr.max_weight) break;
      cur[i] = e;
      rec(i + 1, nb, nw);
    }
    cur[i] = 0;
  };
  rec(0, {0, 0}, 0);
  for (auto& [b, ms] : basis) std::sort(ms.begin(), ms.end());

  Grid grid{0, 0};
  for (const auto& [b, ms] : basis) {
    grid.P = std::max(grid.P, b.p + 1);
    grid.Q = std::max(grid.Q, b.q + 1);
  }
  std::map<Bidegree, std::size_t> dims;
  for (const auto& [b, ms] : basis) dims[b] = ms.size();
  DoubleComplex c(grid, dims);

  auto position = [&](Bidegree b, const Monomial& m) -> std::optional<std::size_t> {
    auto it = basis.find(b);
    if (it == basis.end()) return std::nullopt;
    auto jt = std::lower_bound(it->second.begin(), it->second.end(), m);
    if (jt == it->second.end() || *jt != m) return std::nullopt;
    return static_cast<std::size_t>(jt - it->second.begin());
  };

  for (const auto& [b, ms] : basis) {
    for (int which = 0; which < 2; ++which) {
      const Bidegree t = which == 0 ? Bidegree{b.p + 1, b.q} : Bidegree{b.p, b.q + 1};
      Matrix m(c.dim(t), ms.size());
      for (std::size_t j = 0; j < ms.size(); ++j) {
        Polynomial img = apply_derivation(spec, which == 0 ? im1 : im2, ms[j]);
        for (const auto& [mm, cc] : img)
          if (auto pos = position(t, mm)) m(*pos, j) = cc;
      }
      if (grid.contains(t.p, t.q)) {
        if (which == 0)
          c.set_d1(b.p, b.q, m);
        else
          c.set_d2(b.p, b.q, m);
      }
    }
    std::vector<std::string> labels;
    for (const auto& mm : ms) labels.push_back(monomial_to_string(spec, mm));
    c.set_labels(b.p, b.q, labels);
  }
  ValidationReport rep = validate(c);
  if (!rep.ok()) throw InvalidComplex("induced derivations do not form a double complex: " + rep.summary());
  return {std::move(c), std::move(basis)};
}

inline DoubleComplex build_cdga(const CdgaSpec& spec) { return build_cdga_with_basis(spec).complex; }

inline CdgaSpec calabi_eckmann_spec(int u, int v, int W) {
  if (u < 0 || v < u) throw InvalidInput("Calabi-Eckmann parameters need 0 <= u <= v");
  CdgaSpec s;
  const std::string y = "y" + std::to_string(u + 1) + std::to_string(u);
  const std::string x = "x" + std::to_string(v + 1) + std::to_string(v);
  s.generators = {{"x01", {0, 1}}, {"x11", {1, 1}}, {y, {u + 1, u}}, {x, {v + 1, v}}};
  s.d2_rules[y] = "x11^" + std::to_string(u + 1);
  s.d1_rules["x01"] = "x11";
  s.truncation.weights = {{"x11", 1}, {y, u + 1}};
  s.truncation.max_weight = W;
  s.truncation.max_p = W + v + 1;
  s.truncation.max_q = W + v + 1;
  return s;
}

inline int calabi_eckmann_default_weight(int u, int v) { return 2 * (u + v + 2); }

// Largest p for which the truncated model is certified.
inline int calabi_eckmann_certified_max_p(int u, int W) { return W - (u + 2); }

struct CalabiEckmannModel {
  DoubleComplex complex;
  int u, v, W;
  int certified_max_p;
};

// The reported bidegrees (n, n-1) and (n-1, n-1), n = u+v+1, must lie in the
// certified zone p <= W - (u+2).
inline CalabiEckmannModel example_calabi_eckmann(int u, int v, std::optional<int> weight = std::nullopt) {
  const int W = weight ? *weight : calabi_eckmann_default_weight(u, v);
  const int n = u + v + 1;
  if (u < 0 || v < u) throw InvalidInput("Calabi-Eckmann parameters need 0 <= u <= v");
  if (n > calabi_eckmann_certified_max_p(u, W))
    throw InvalidInput("W too small for requested report range: need W >= " + std::to_string(n + u + 2) +
                       " so that p = " + std::to_string(n) + " is certified");
  CalabiEckmannModel m{build_cdga(calabi_eckmann_spec(u, v, W)), u, v, W, calabi_eckmann_certified_max_p(u, W)};
  m.complex.set_name("calabi-eckmann(u=" + std::to_string(u) + ",v=" + std::to_string(v) + ",W=" + std::to_string(W) + ")");
  m.complex.set_certified_max_p(m.certified_max_p);
  return m;
}

}  // namespace ddbar
