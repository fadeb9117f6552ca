#pragma once

// JSON file formats: complexes, CDGA descriptions, Gram matrices, pairings,
// shapes and decomposition certificates.  Structural errors name the JSON
// path; syntax errors carry line, column and byte offset.

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "ddbar/hodge.hpp"
#include "ddbar/models.hpp"
#include "ddbar/pairing.hpp"
#include "ddbar/zigzag.hpp"

namespace ddbar {

using Json = nlohmann::json;

inline Json parse_json(std::string_view text, const std::string& source = "<input>") {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (auto k = msg.find("syntax error"); k != std::string::npos) msg = msg.substr(k);
    throw ParseError(source + ": line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg, e.byte);
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json load_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

namespace detail {

[[noreturn]] inline void bad(const std::string& path, const std::string& what) {
  throw InvalidInput(path + ": " + what);
}

inline const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path, std::string("missing field '") + key + "'");
  return *it;
}

inline int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<int>();
}

inline std::size_t as_count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) bad(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

inline Bidegree as_pair(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) bad(path, "expected [p, q]");
  return {as_int(j[0], path + "[0]"), as_int(j[1], path + "[1]")};
}

// "p,q"
inline Bidegree parse_key(const std::string& key, const std::string& path) {
  const auto comma = key.find(',');
  auto number = [&](std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && s[b] == ' ') ++b;
    while (e > b && s[e - 1] == ' ') --e;
    if (b == e) bad(path, "malformed bidegree key '" + key + "'");
    std::size_t k = b;
    if (s[k] == '-') ++k;
    if (k == e) bad(path, "malformed bidegree key '" + key + "'");
    for (std::size_t i = k; i < e; ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) bad(path, "malformed bidegree key '" + key + "'");
    return std::stoi(std::string(s.substr(b, e - b)));
  };
  if (comma == std::string::npos) bad(path, "malformed bidegree key '" + key + "' (expected \"p,q\")");
  const std::string_view v(key);
  return {number(v.substr(0, comma)), number(v.substr(comma + 1))};
}

inline Rational as_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  if (!j.is_string()) bad(path, "expected a rational string \"a/b\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const ParseError& e) {
    bad(path, e.what());
  }
}

}  // namespace detail

inline Json to_json(const Rational& x) { return x.get_str(); }

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// An empty array stands for any matrix with zero rows.
inline Matrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols, const std::string& path) {
  if (!j.is_array()) detail::bad(path, "expected an array of rows");
  if (j.size() != rows && !(rows == 0 && j.empty()))
    detail::bad(path, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != cols)
      detail::bad(rp, "expected a row of " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = detail::as_rational(j[i][k], rp + "[" + std::to_string(k) + "]");
  }
  return m;
}

inline Vector vector_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) detail::bad(path, "expected an array");
  Vector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(detail::as_rational(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

template <class F>
inline void for_each_block(const Json& obj, const std::string& path, F&& f) {
  if (!obj.is_object()) detail::bad(path, "expected an object keyed by \"p,q\"");
  for (const auto& [key, value] : obj.items()) {
    const std::string kp = path + "[\"" + key + "\"]";
    f(detail::parse_key(key, kp), value, kp);
  }
}

// ---- complexes

inline DoubleComplex complex_from_json(const Json& j) {
  const std::string root = "$";
  if (!j.is_object()) detail::bad(root, "expected an object");
  const Bidegree gp = detail::as_pair(detail::field(j, "grid", root), root + ".grid");
  if (gp.p < 0 || gp.q < 0) detail::bad(root + ".grid", "grid bounds must be nonnegative");
  const Grid g{gp.p, gp.q};
  std::map<Bidegree, std::size_t> dims;
  if (j.contains("dims"))
    for_each_block(j["dims"], root + ".dims", [&](Bidegree b, const Json& v, const std::string& p) {
      const std::size_t n = detail::as_count(v, p);
      if (!g.contains(b.p, b.q) && n > 0) detail::bad(p, "dimension given outside the grid");
      if (n > 0) dims[b] = n;
    });
  DoubleComplex c(g, dims);
  if (j.contains("name")) {
    if (!j["name"].is_string()) detail::bad(root + ".name", "expected a string");
    c.set_name(j["name"].get<std::string>());
  }
  auto read_maps = [&](const char* key, bool first) {
    if (!j.contains(key)) return;
    for_each_block(j[key], root + "." + key, [&](Bidegree b, const Json& v, const std::string& p) {
      if (!g.contains(b.p, b.q)) detail::bad(p, "map given outside the grid");
      const Bidegree t = first ? Bidegree{b.p + 1, b.q} : Bidegree{b.p, b.q + 1};
      Matrix m = matrix_from_json(v, c.dim(t), c.dim(b), p);
      if (first) c.set_d1(b.p, b.q, std::move(m));
      else c.set_d2(b.p, b.q, std::move(m));
    });
  };
  read_maps("d1", true);
  read_maps("d2", false);
  if (j.contains("labels"))
    for_each_block(j["labels"], root + ".labels", [&](Bidegree b, const Json& v, const std::string& p) {
      if (!v.is_array()) detail::bad(p, "expected an array of strings");
      std::vector<std::string> l;
      for (const auto& s : v) {
        if (!s.is_string()) detail::bad(p, "expected an array of strings");
        l.push_back(s.get<std::string>());
      }
      if (!g.contains(b.p, b.q) || l.size() != c.dim(b)) detail::bad(p, "label count does not match the dimension");
      c.set_labels(b.p, b.q, std::move(l));
    });
  if (j.contains("certified_max_p")) c.set_certified_max_p(detail::as_int(j["certified_max_p"], root + ".certified_max_p"));
  std::string conv = "anticommute";
  if (j.contains("convention")) {
    if (!j["convention"].is_string()) detail::bad(root + ".convention", "expected a string");
    conv = j["convention"].get<std::string>();
  }
  if (conv == "commute") return twist_commuting(c);
  if (conv != "anticommute") detail::bad(root + ".convention", "expected \"anticommute\" or \"commute\"");
  return c;
}

inline Json complex_to_json(const DoubleComplex& c) {
  Json j;
  j["name"] = c.name();
  j["convention"] = "anticommute";
  j["grid"] = {c.grid().P, c.grid().Q};
  j["dims"] = Json::object();
  j["d1"] = Json::object();
  j["d2"] = Json::object();
  for (const auto& [p, q] : c.bidegrees()) {
    const std::string key = to_string(Bidegree{p, q});
    if (c.dim(p, q) == 0) continue;
    j["dims"][key] = c.dim(p, q);
    if (!c.d1(p, q).is_zero()) j["d1"][key] = to_json(c.d1(p, q));
    if (!c.d2(p, q).is_zero()) j["d2"][key] = to_json(c.d2(p, q));
    if (!c.labels(p, q).empty()) j["labels"][key] = c.labels(p, q);
  }
  if (c.certified_max_p()) j["certified_max_p"] = *c.certified_max_p();
  return j;
}

inline DoubleComplex load_complex_file(const std::string& path) { return complex_from_json(load_json_file(path)); }

// ---- CDGA descriptions

inline CdgaSpec cdga_from_json(const Json& j) {
  const std::string root = "$";
  CdgaSpec s;
  const Json& gens = detail::field(j, "generators", root);
  if (!gens.is_array()) detail::bad(root + ".generators", "expected an array");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string p = root + ".generators[" + std::to_string(i) + "]";
    const Json& name = detail::field(gens[i], "name", p);
    if (!name.is_string()) detail::bad(p + ".name", "expected a string");
    s.generators.push_back({name.get<std::string>(), detail::as_pair(detail::field(gens[i], "bidegree", p), p + ".bidegree")});
  }
  auto rules = [&](const char* key, std::map<std::string, std::string>& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_object()) detail::bad(root + "." + key, "expected an object of expressions");
    for (const auto& [g, e] : j[key].items()) {
      if (!e.is_string()) detail::bad(root + "." + key + "." + g, "expected an expression string");
      out[g] = e.get<std::string>();
    }
  };
  rules("d1", s.d1_rules);
  rules("d2", s.d2_rules);
  const Json& t = detail::field(j, "truncation", root);
  const std::string tp = root + ".truncation";
  s.truncation.max_p = detail::as_int(detail::field(t, "max_p", tp), tp + ".max_p");
  s.truncation.max_q = detail::as_int(detail::field(t, "max_q", tp), tp + ".max_q");
  if (t.contains("weights")) {
    if (!t["weights"].is_object()) detail::bad(tp + ".weights", "expected an object");
    for (const auto& [g, w] : t["weights"].items()) s.truncation.weights[g] = detail::as_int(w, tp + ".weights." + g);
  }
  if (t.contains("max_weight")) s.truncation.max_weight = detail::as_int(t["max_weight"], tp + ".max_weight");
  return s;
}

inline Json cdga_to_json(const CdgaSpec& s) {
  Json j;
  j["generators"] = Json::array();
  for (const auto& g : s.generators) j["generators"].push_back({{"name", g.name}, {"bidegree", {g.bidegree.p, g.bidegree.q}}});
  j["d1"] = s.d1_rules;
  j["d2"] = s.d2_rules;
  j["truncation"] = {{"max_p", s.truncation.max_p}, {"max_q", s.truncation.max_q}};
  if (!s.truncation.weights.empty()) j["truncation"]["weights"] = s.truncation.weights;
  if (s.truncation.max_weight) j["truncation"]["max_weight"] = *s.truncation.max_weight;
  return j;
}

// A file holding a CDGA description is recognised by its generator list.
inline bool is_cdga_json(const Json& j) { return j.is_object() && j.contains("generators"); }

// ---- Gram matrices and pairings

inline InnerProduct inner_product_from_json(const Json& j, const DoubleComplex& c) {
  std::map<Bidegree, Matrix> grams;
  for_each_block(j, "$", [&](Bidegree b, const Json& v, const std::string& p) {
    if (!c.grid().contains(b.p, b.q)) detail::bad(p, "Gram matrix given outside the grid");
    grams[b] = matrix_from_json(v, c.dim(b), c.dim(b), p);
  });
  InnerProduct ip(std::move(grams));
  validate_inner_product(c, ip);
  return ip;
}

inline Json inner_product_to_json(const InnerProduct& ip) {
  Json j = Json::object();
  for (const auto& [b, g] : ip.grams()) j[to_string(b)] = to_json(g);
  return j;
}

inline DualityPairing pairing_from_json(const Json& j, const DoubleComplex& c) {
  DualityPairing pr;
  pr.top = detail::as_pair(detail::field(j, "n", "$"), "$.n");
  if (j.contains("pairs"))
    for_each_block(j["pairs"], "$.pairs", [&](Bidegree b, const Json& v, const std::string& p) {
      if (!c.grid().contains(b.p, b.q)) detail::bad(p, "pairing block given outside the grid");
      pr.pairs[b] = matrix_from_json(v, c.dim(b), c.dim(pr.partner(b)), p);
    });
  return pr;
}

inline Json pairing_to_json(const DualityPairing& pr) {
  Json j;
  j["n"] = {pr.top.p, pr.top.q};
  j["pairs"] = Json::object();
  for (const auto& [b, m] : pr.pairs) j["pairs"][to_string(b)] = to_json(m);
  return j;
}

// ---- shapes and certificates

inline Json shape_to_json(const Shape& s) {
  if (const auto* sq = std::get_if<Square>(&s)) return {{"kind", "square"}, {"at", {sq->at.p, sq->at.q}}};
  const auto& z = std::get<ZigzagShape>(s);
  return {{"kind", "zigzag"},      {"type", z.type()},   {"length", z.length()},
          {"start", {z.start.p, z.start.q}}, {"generators", z.generators}, {"left", z.left},
          {"right", z.right}};
}

inline Shape shape_from_json(const Json& j, const std::string& path) {
  const Json& kind = detail::field(j, "kind", path);
  if (kind == "square") return Square{detail::as_pair(detail::field(j, "at", path), path + ".at")};
  if (kind != "zigzag") detail::bad(path + ".kind", "expected \"square\" or \"zigzag\"");
  ZigzagShape z;
  z.start = detail::as_pair(detail::field(j, "start", path), path + ".start");
  z.generators = detail::as_int(detail::field(j, "generators", path), path + ".generators");
  const Json& l = detail::field(j, "left", path);
  const Json& r = detail::field(j, "right", path);
  if (!l.is_boolean() || !r.is_boolean()) detail::bad(path, "left and right must be booleans");
  z.left = l.get<bool>();
  z.right = r.get<bool>();
  if (z.generators < 1) detail::bad(path + ".generators", "at least one generator is needed");
  return z;
}

inline Json inventory_to_json(const ShapeInventory& inv) {
  Json a = Json::array();
  for (const auto& e : inv.entries) {
    Json s = shape_to_json(e.shape);
    s["description"] = describe(e.shape);
    s["multiplicity"] = e.multiplicity;
    a.push_back(std::move(s));
  }
  return a;
}

// {"blocks": [shape], "transform": {"p,q": matrix}, "assignment": {"p,q": [block index]}}
inline Json certificate_to_json(const DecompositionCertificate& cert) {
  Json j;
  j["blocks"] = Json::array();
  for (const auto& s : cert.blocks) j["blocks"].push_back(shape_to_json(s));
  j["transform"] = Json::object();
  for (const auto& [b, m] : cert.transform) j["transform"][to_string(b)] = to_json(m);
  j["assignment"] = Json::object();
  for (const auto& [b, owners] : cert.assignment) j["assignment"][to_string(b)] = owners;
  return j;
}

inline DecompositionCertificate certificate_from_json(const Json& j) {
  DecompositionCertificate cert;
  const Json& blocks = detail::field(j, "blocks", "$");
  if (!blocks.is_array()) detail::bad("$.blocks", "expected an array");
  for (std::size_t i = 0; i < blocks.size(); ++i)
    cert.blocks.push_back(shape_from_json(blocks[i], "$.blocks[" + std::to_string(i) + "]"));
  for_each_block(detail::field(j, "assignment", "$"), "$.assignment", [&](Bidegree b, const Json& v, const std::string& p) {
    if (!v.is_array()) detail::bad(p, "expected an array of block indices");
    for (std::size_t i = 0; i < v.size(); ++i) cert.assignment[b].push_back(detail::as_count(v[i], p));
  });
  for_each_block(detail::field(j, "transform", "$"), "$.transform", [&](Bidegree b, const Json& v, const std::string& p) {
    const std::size_t n = cert.assignment.count(b) ? cert.assignment[b].size() : 0;
    cert.transform[b] = matrix_from_json(v, n, n, p);
  });
  return cert;
}

}  // namespace ddbar
