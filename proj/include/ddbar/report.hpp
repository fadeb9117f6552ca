#pragma once

// Report sections as JSON values, the Report container, its Markdown
// rendering and the built-in example:// complexes.
//
// Dimension tables are arrays of P rows (p = 0 first) of Q entries; an entry
// is null where a truncated model is not certified.

#include <cstdint>
#include <optional>
#include <sstream>

#include "ddbar/io.hpp"
#include "ddbar/random.hpp"

namespace ddbar {

inline constexpr int report_format_version = 1;

inline Json grid_to_json(const DimGrid& d, std::optional<int> max_p = std::nullopt) {
  Json rows = Json::array();
  for (int p = 0; p < d.grid.P; ++p) {
    Json row = Json::array();
    for (int q = 0; q < d.grid.Q; ++q) {
      if (max_p && p > *max_p) row.push_back(nullptr);
      else row.push_back(d.at(p, q));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json complex_metadata(const DoubleComplex& c) {
  DimGrid dims(c.grid());
  for (const auto& [p, q] : c.bidegrees()) dims.at(p, q) = c.dim(p, q);
  Json j;
  j["name"] = c.name();
  j["grid"] = {c.grid().P, c.grid().Q};
  j["dims"] = grid_to_json(dims);
  j["total_dim"] = c.total_dim();
  j["betti"] = de_rham_dims(total_complex(c));
  if (c.certified_max_p()) j["certified_max_p"] = *c.certified_max_p();
  return j;
}

namespace detail {

inline void certified_warning(const DoubleComplex& c, Json& section) {
  if (c.certified_max_p())
    section["warnings"].push_back("truncated model: entries with p > " + std::to_string(*c.certified_max_p()) +
                                  " are not certified and are reported as null");
}

}  // namespace detail

inline Json pages_section(const DoubleComplex& c, int r_max, bool show_reps = false, bool with_oracle = false) {
  const PageTable t = page_dims(c, r_max);
  const auto cmax = c.certified_max_p();
  Json j;
  j["r_max"] = r_max;
  j["pages"] = Json::array();
  for (int r = 1; r <= r_max; ++r) {
    const auto i = static_cast<std::size_t>(r - 1);
    j["pages"].push_back({{"r", r}, {"e", grid_to_json(t.e[i], cmax)}, {"ebar", grid_to_json(t.ebar[i], cmax)}});
  }
  if (!cmax) {
    j["degeneration_page"] = degeneration_page(c);
    const EinftyReport inf = einfty_check(c);
    j["betti"] = inf.betti;
    j["einfty_matches_betti"] = inf.ok;
  }
  if (with_oracle) j["oracle_agrees"] = iterated_pages_oracle(c, r_max).e == t.e;
  if (show_reps) {
    j["representatives"] = Json::array();
    for (int r = 1; r <= r_max; ++r)
      for (const auto& [p, q] : c.bidegrees()) {
        if (t.at(r, p, q) == 0 || (cmax && p > *cmax)) continue;
        const Matrix reps = page_basis(c, r, p, q).representatives();
        Json vs = Json::array();
        for (std::size_t k = 0; k < reps.cols(); ++k) vs.push_back(to_json(reps.column(k)));
        j["representatives"].push_back({{"r", r}, {"at", {p, q}}, {"vectors", vs}});
      }
  }
  detail::certified_warning(c, j);
  return j;
}

inline Json bca_section(const DoubleComplex& c, int r_max) {
  const BcaTable t = bca_dims(c, r_max);
  const auto cmax = c.certified_max_p();
  Json j;
  j["r_max"] = r_max;
  j["pages"] = Json::array();
  for (int r = 1; r <= r_max; ++r) {
    const auto i = static_cast<std::size_t>(r - 1);
    Json e{{"r", r}, {"bc", grid_to_json(t.bc[i], cmax)}, {"a", grid_to_json(t.a[i], cmax)}};
    if (!cmax) {
      const InequalityReport ineq = inequality_check(c, r);
      e["inequality"] = {{"bc_plus_a", ineq.bc_plus_a},     {"e_plus_ebar", ineq.e_plus_ebar},
                         {"twice_betti", ineq.twice_betti}, {"chain_holds", ineq.chain_holds},
                         {"outer_equal", ineq.outer_equal}, {"ok", ineq.ok}};
    }
    j["pages"].push_back(std::move(e));
  }
  detail::certified_warning(c, j);
  return j;
}

inline Json witness_to_json(const Witness& w) {
  return {{"at", {w.at.p, w.at.q}}, {"form", to_json(w.form)}, {"description", w.description}};
}

inline Json verdict_to_json(const PageDdbarVerdict& v, bool explain) {
  Json j;
  j["r"] = v.r;
  j["page"] = v.r - 1;
  j["verdict"] = v.verdict;
  j["criteria"] = {{"B", v.b_iso}, {"C", v.c_dims}, {"D", v.d_injective}, {"E", v.e_exactness}};
  j["criteria"]["F"] = v.f_identities ? Json(*v.f_identities) : Json(nullptr);
  j["criteria"]["structure"] = v.structure ? Json(*v.structure) : Json(nullptr);
  j["duality_gap"] = v.duality_gap();
  j["count_gap"] = v.count_gap();
  if (explain) {
    j["failures"] = v.failures;
    if (v.witness) j["witness"] = witness_to_json(*v.witness);
  }
  return j;
}

// The structure criterion needs a unique decomposition; pass the solver
// result when one is at hand, otherwise it is left null.
inline Json verdicts_section(const DoubleComplex& c, int r_min, int r_max, bool explain,
                             const MultiplicityResult* decomposition = nullptr) {
  Json j;
  j["checks"] = Json::array();
  for (int r = r_min; r <= r_max; ++r) {
    PageDdbarVerdict v = page_ddbar_verdict(c, r, false);
    if (decomposition && decomposition->status == SolveStatus::Unique && !decomposition->search_truncated)
      v.structure = structure_verdict(decomposition->inventory, r);
    check_verdict_consistency(v);
    j["checks"].push_back(verdict_to_json(v, explain));
  }
  return j;
}

inline Json hodge_section(const DoubleComplex& c, const InnerProduct& ip, int r_max) {
  const HarmonicTower t = harmonic_tower(c, ip, r_max);
  const PageTable pages = page_dims(c, r_max, false);
  Json j;
  j["r_max"] = r_max;
  j["gram"] = ip.is_identity() ? "identity" : "custom";
  j["laplacian_kernels_agree"] = t.laplacian_kernels_agree;
  j["d_operator_valid"] = t.d_operator_valid;
  j["pages"] = Json::array();
  bool all_ok = t.laplacian_kernels_agree && t.d_operator_valid;
  for (int r = 1; r <= r_max; ++r) {
    DimGrid h(c.grid()), bc(c.grid()), a(c.grid());
    bool matches_e = true, three_space = true;
    Json failures = Json::array();
    for (const auto& [p, q] : c.bidegrees()) {
      if (c.dim(p, q) == 0) continue;
      h.at(p, q) = t.h(r, {p, q}).dim();
      if (h.at(p, q) != pages.at(r, p, q)) matches_e = false;
      const ThreeSpaceDecomposition d = three_space_decomposition(c, ip, t, r, p, q);
      if (!d.ok()) {
        three_space = false;
        for (const auto& f : d.failures) failures.push_back(f);
      }
      const BcaHarmonic hb = bc_a_harmonic_spaces(c, ip, r, p, q);
      bc.at(p, q) = hb.bc.dim();
      a.at(p, q) = hb.a.dim();
    }
    all_ok = all_ok && matches_e && three_space;
    Json e{{"r", r},
           {"harmonic", grid_to_json(h)},
           {"harmonic_bc", grid_to_json(bc)},
           {"harmonic_a", grid_to_json(a)},
           {"harmonic_matches_e", matches_e},
           {"three_space_ok", three_space}};
    if (!failures.empty()) e["failures"] = failures;
    j["pages"].push_back(std::move(e));
  }
  j["ok"] = all_ok;
  return j;
}

inline Json decomposition_section(const MultiplicityResult& m, const DecompositionCertificate* cert = nullptr,
                                  const DoubleComplex* c = nullptr) {
  Json j;
  j["status"] = m.status == SolveStatus::Unique ? "unique" : "ambiguous";
  j["candidate_shapes"] = m.candidate_shapes;
  j["solution_space_dim"] = m.solution_space_dim;
  j["search_truncated"] = m.search_truncated;
  j["inventory"] = inventory_to_json(m.inventory);
  j["count"] = m.inventory.count();
  if (m.status == SolveStatus::Ambiguous) {
    j["alternatives"] = Json::array();
    for (const auto& alt : m.alternatives) j["alternatives"].push_back(inventory_to_json(alt));
  }
  if (cert && c) {
    const CertificateReport rep = verify_certificate(*c, *cert);
    j["certificate"] = certificate_to_json(*cert);
    j["certificate_verified"] = rep.ok;
    if (!rep.ok) j["certificate_failure"] = rep.failure;
  }
  return j;
}

inline Json duality_section(const DoubleComplex& c, const DualityPairing& pr, int r_max) {
  const PairingReport v = validate_pairing(c, pr);
  Json j;
  j["n"] = {pr.top.p, pr.top.q};
  j["valid"] = v.valid;
  j["perfect"] = v.perfect;
  j["graded_symmetric"] = v.graded_symmetric;
  if (!v.violations.empty()) j["violations"] = v.violations;
  j["pages"] = Json::array();
  if (!v.valid) return j;
  for (int r = 1; r <= r_max; ++r) {
    bool er_nd = true, er_wd = true, bca_nd = true, bca_wd = true;
    for (const auto& [p, q] : c.bidegrees()) {
      const Bidegree o = pr.partner({p, q});
      if (!c.grid().contains(o.p, o.q)) continue;
      if (c.dim(p, q) == 0 && c.dim(o) == 0) continue;
      const InducedPairing e = induced_pairing_er(c, pr, r, p, q);
      er_nd = er_nd && e.nondegenerate;
      er_wd = er_wd && e.well_defined;
      const InducedPairing b = induced_pairing_bc_a(c, pr, r, p, q);
      bca_nd = bca_nd && b.nondegenerate;
      bca_wd = bca_wd && b.well_defined;
    }
    const BcBcReport bb = induced_pairing_bc_bc(c, pr, r);
    j["pages"].push_back({{"r", r},
                          {"er_well_defined", er_wd},
                          {"er_nondegenerate", er_nd},
                          {"bc_a_well_defined", bca_wd},
                          {"bc_a_nondegenerate", bca_nd},
                          {"bc_bc_nondegenerate", bb.nondegenerate},
                          {"verdict", bb.verdict},
                          {"bc_bc_agrees_with_verdict", bb.agrees}});
  }
  return j;
}

struct Report {
  Json complex;                       // metadata
  std::map<std::string, Json> sections;  // pages, bca, verdicts, hodge, decomposition, duality

  Json to_json() const {
    Json j;
    j["format_version"] = report_format_version;
    j["complex"] = complex;
    for (const auto& [k, v] : sections) j[k] = v;
    return j;
  }

  static Report from_json(const Json& j) {
    if (!j.is_object() || !j.contains("format_version")) throw InvalidInput("$: not a report (no format_version)");
    if (j["format_version"] != report_format_version)
      throw InvalidInput("$.format_version: unsupported report version " + j["format_version"].dump());
    Report r;
    r.complex = detail::field(j, "complex", "$");
    for (const auto& [k, v] : j.items())
      if (k != "format_version" && k != "complex") r.sections[k] = v;
    return r;
  }

  friend bool operator==(const Report&, const Report&) = default;
};

// ---- Markdown

namespace detail {

inline std::string cell(const Json& v) {
  if (v.is_null()) return "·";
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// p rows, q columns, p increasing downward.
inline void md_table(std::ostringstream& out, const Json& rows) {
  std::size_t Q = 0;
  for (const auto& row : rows) Q = std::max<std::size_t>(Q, row.size());
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head{"p\\q"};
  for (std::size_t q = 0; q < Q; ++q) head.push_back(std::to_string(q));
  cells.push_back(head);
  for (std::size_t p = 0; p < rows.size(); ++p) {
    std::vector<std::string> line{std::to_string(p)};
    for (std::size_t q = 0; q < Q; ++q) line.push_back(q < rows[p].size() ? cell(rows[p][q]) : "");
    cells.push_back(line);
  }
  std::vector<std::size_t> w(Q + 1, 3);
  for (const auto& l : cells)
    for (std::size_t k = 0; k < l.size(); ++k) w[k] = std::max(w[k], l[k].size());
  auto emit = [&](const std::vector<std::string>& l) {
    out << "|";
    for (std::size_t k = 0; k < l.size(); ++k) out << " " << std::string(w[k] - l[k].size(), ' ') << l[k] << " |";
    out << "\n";
  };
  emit(cells[0]);
  out << "|";
  for (std::size_t k = 0; k <= Q; ++k) out << std::string(w[k] + 1, '-') << ":|";
  out << "\n";
  for (std::size_t i = 1; i < cells.size(); ++i) emit(cells[i]);
  out << "\n";
}

inline void md_flags(std::ostringstream& out, const Json& obj) {
  for (const auto& [k, v] : obj.items()) {
    if (v.is_array() || v.is_object()) continue;
    out << "- " << k << ": " << cell(v) << "\n";
  }
}

inline void md_list(std::ostringstream& out, const Json& obj, const char* key) {
  if (!obj.contains(key)) return;
  out << "\n" << key << ":\n";
  for (const auto& s : obj[key]) out << "- " << cell(s) << "\n";
}

inline void md_shapes(std::ostringstream& out, const Json& inv) {
  out << "| shape | multiplicity |\n|---|---:|\n";
  for (const auto& e : inv) out << "| " << e["description"].get<std::string>() << " | " << e["multiplicity"] << " |\n";
  out << "\n";
}

inline std::string vector_text(const Json& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + cell(v[i]);
  return s + ")";
}

}  // namespace detail

inline std::string render_markdown(const Json& report) {
  std::ostringstream out;
  const Json& c = report.at("complex");
  out << "# " << (c.value("name", std::string()).empty() ? "double complex" : c["name"].get<std::string>()) << "\n\n";
  out << "report format " << report.at("format_version") << ", grid " << c["grid"][0] << " x " << c["grid"][1]
      << ", total dimension " << c["total_dim"] << "\n\n";
  out << "## Dimensions\n\n";
  detail::md_table(out, c["dims"]);
  out << "Betti numbers by total degree: " << detail::vector_text(c["betti"]) << "\n\n";
  if (c.contains("certified_max_p")) out << "Certified range: p <= " << c["certified_max_p"] << "\n\n";

  if (report.contains("pages")) {
    const Json& s = report["pages"];
    out << "## Frölicher pages\n\n";
    for (const auto& pg : s["pages"]) {
      out << "### E_" << pg["r"] << "\n\n";
      detail::md_table(out, pg["e"]);
      out << "### Ebar_" << pg["r"] << "\n\n";
      detail::md_table(out, pg["ebar"]);
    }
    detail::md_flags(out, s);
    if (s.contains("representatives")) {
      out << "\nRepresentatives:\n";
      for (const auto& rep : s["representatives"]) {
        out << "- E_" << rep["r"] << " at (" << rep["at"][0] << "," << rep["at"][1] << "):";
        for (const auto& v : rep["vectors"]) out << " " << detail::vector_text(v);
        out << "\n";
      }
    }
    detail::md_list(out, s, "warnings");
    out << "\n";
  }
  if (report.contains("bca")) {
    const Json& s = report["bca"];
    out << "## Bott-Chern and Aeppli\n\n";
    for (const auto& pg : s["pages"]) {
      out << "### BC_" << pg["r"] << "\n\n";
      detail::md_table(out, pg["bc"]);
      out << "### A_" << pg["r"] << "\n\n";
      detail::md_table(out, pg["a"]);
      if (pg.contains("inequality")) {
        detail::md_flags(out, pg["inequality"]);
        out << "\n";
      }
    }
    detail::md_list(out, s, "warnings");
  }
  if (report.contains("verdicts")) {
    out << "## Page ddbar verdicts\n\n";
    out << "| r | page | verdict | B | C | D | E | F | structure | duality gap | count gap |\n";
    out << "|---:|---:|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& v : report["verdicts"]["checks"]) {
      const Json& k = v["criteria"];
      out << "| " << v["r"] << " | " << v["page"] << " | " << detail::cell(v["verdict"]) << " | " << detail::cell(k["B"])
          << " | " << detail::cell(k["C"]) << " | " << detail::cell(k["D"]) << " | " << detail::cell(k["E"]) << " | "
          << detail::cell(k["F"]) << " | " << detail::cell(k["structure"]) << " | " << detail::cell(v["duality_gap"])
          << " | " << detail::cell(v.value("count_gap", Json(nullptr))) << " |\n";
    }
    out << "\n";
    for (const auto& v : report["verdicts"]["checks"]) {
      if (v.contains("failures") && !v["failures"].empty()) {
        out << "Failures at r=" << v["r"] << ":\n";
        for (const auto& f : v["failures"]) out << "- " << f.get<std::string>() << "\n";
        out << "\n";
      }
      if (v.contains("witness")) {
        const Json& w = v["witness"];
        out << "Witness at r=" << v["r"] << ", bidegree (" << w["at"][0] << "," << w["at"][1]
            << "): " << w["description"].get<std::string>() << ", form " << detail::vector_text(w["form"]) << "\n\n";
      }
    }
  }
  if (report.contains("hodge")) {
    const Json& s = report["hodge"];
    out << "## Harmonic spaces\n\n";
    detail::md_flags(out, s);
    out << "\n";
    for (const auto& pg : s["pages"]) {
      out << "### H_" << pg["r"] << "\n\n";
      detail::md_table(out, pg["harmonic"]);
      out << "BC-harmonic:\n\n";
      detail::md_table(out, pg["harmonic_bc"]);
      out << "A-harmonic:\n\n";
      detail::md_table(out, pg["harmonic_a"]);
      detail::md_flags(out, pg);
      detail::md_list(out, pg, "failures");
      out << "\n";
    }
  }
  if (report.contains("decomposition")) {
    const Json& s = report["decomposition"];
    out << "## Decomposition\n\n";
    detail::md_flags(out, s);
    out << "\n";
    detail::md_shapes(out, s["inventory"]);
    if (s.contains("alternatives")) {
      out << "Alternatives:\n\n";
      for (const auto& alt : s["alternatives"]) detail::md_shapes(out, alt);
    }
  }
  if (report.contains("duality")) {
    const Json& s = report["duality"];
    out << "## Duality\n\n";
    detail::md_flags(out, s);
    detail::md_list(out, s, "violations");
    out << "\n";
    if (!s["pages"].empty()) {
      out << "| r | E_r well defined | E_r non-degenerate | BC x A non-degenerate | BC x BC non-degenerate | verdict |\n";
      out << "|---:|---|---|---|---|---|\n";
      for (const auto& pg : s["pages"])
        out << "| " << pg["r"] << " | " << detail::cell(pg["er_well_defined"]) << " | "
            << detail::cell(pg["er_nondegenerate"]) << " | " << detail::cell(pg["bc_a_nondegenerate"]) << " | "
            << detail::cell(pg["bc_bc_nondegenerate"]) << " | " << detail::cell(pg["verdict"]) << " |\n";
      out << "\n";
    }
  }
  static const std::vector<std::string> known{"format_version", "complex", "pages", "bca", "verdicts", "hodge",
                                               "decomposition", "duality"};
  for (const auto& [k, v] : report.items()) {
    if (std::find(known.begin(), known.end(), k) != known.end() || !v.is_object()) continue;
    out << "## " << k << "\n\n";
    detail::md_flags(out, v);
    for (const auto& [lk, lv] : v.items())
      if (lv.is_array()) detail::md_list(out, v, lk.c_str());
    out << "\n";
  }
  return out.str();
}

// ---- built-in examples

struct ExampleComplex {
  DoubleComplex complex;
  std::optional<DecompositionCertificate> certificate;  // known for generated sums
  std::optional<DualityPairing> pairing;                // known for self-dual examples
};

namespace detail {

inline std::map<std::string, std::string> query_params(const std::string& q, const std::string& uri) {
  std::map<std::string, std::string> out;
  std::size_t i = 0;
  while (i < q.size()) {
    std::size_t amp = q.find('&', i);
    if (amp == std::string::npos) amp = q.size();
    const std::string kv = q.substr(i, amp - i);
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidInput(uri + ": malformed parameter '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
    i = amp + 1;
  }
  return out;
}

inline int int_param(const std::map<std::string, std::string>& m, const std::string& key, int dflt,
                     const std::string& uri) {
  auto it = m.find(key);
  if (it == m.end()) return dflt;
  try {
    std::size_t used = 0;
    const int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InvalidInput(uri + ": parameter " + key + " must be an integer");
  }
}

inline Bidegree pair_param(const std::map<std::string, std::string>& m, const std::string& key, Bidegree dflt,
                           const std::string& uri) {
  auto it = m.find(key);
  if (it == m.end()) return dflt;
  return parse_key(it->second, uri + ": parameter " + key);
}

inline ExampleComplex from_sum(const std::vector<Shape>& shapes, Grid g, const std::string& name) {
  ExampleComplex ex;
  ex.complex = DoubleComplex(g);
  for (const auto& s : shapes) ex.complex = direct_sum(ex.complex, build_shape(s, g));
  ex.complex.set_name(name);
  ex.certificate = certificate_for_sum(shapes);
  return ex;
}

}  // namespace detail

inline const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names{
      "dot", "square", "zigzag", "shapes", "ce11", "ce01", "calabi-eckmann", "random", "self-dual"};
  return names;
}

// example://name[?k=v&...]
//   dot                         one-dimensional complex at (0,0)
//   square?at=p,q
//   zigzag?start=p,q&gens=g&left=0|1&right=0|1
//   shapes?P=..&Q=..            every shape on the grid, summed
//   ce11, ce01, calabi-eckmann?u=..&v=..[&w=..]
//   random?P=..&Q=..&dim=..&shapes=..&seed=..
//   self-dual?P=..&Q=..&dim=..&seed=..   Z + dual(Z) with its pairing
inline ExampleComplex example_complex(const std::string& uri, std::uint64_t seed = 1) {
  const std::string prefix = "example://";
  if (uri.rfind(prefix, 0) != 0) throw InvalidInput("not an example URI: " + uri);
  std::string rest = uri.substr(prefix.size()), query;
  if (auto qm = rest.find('?'); qm != std::string::npos) {
    query = rest.substr(qm + 1);
    rest = rest.substr(0, qm);
  }
  const auto params = detail::query_params(query, uri);
  auto I = [&](const char* k, int d) { return detail::int_param(params, k, d, uri); };
  auto seed_of = [&]() {
    auto it = params.find("seed");
    if (it == params.end()) return seed;
    return static_cast<std::uint64_t>(I("seed", 0));
  };
  auto grid_of = [&](int d) {
    const Grid g{I("P", d), I("Q", d)};
    if (g.P < 1 || g.Q < 1 || g.P > 12 || g.Q > 12) throw InvalidInput(uri + ": grid sides must lie in 1..12");
    return g;
  };

  if (rest == "dot") return detail::from_sum({ZigzagShape{{0, 0}, 1, false, false}}, {1, 1}, "dot");
  if (rest == "square") {
    const Bidegree at = detail::pair_param(params, "at", {0, 0}, uri);
    const Shape s = Square{at};
    return detail::from_sum({s}, minimal_grid(s), describe(s));
  }
  if (rest == "zigzag") {
    const ZigzagShape z{detail::pair_param(params, "start", {0, 0}, uri), I("gens", 1), I("left", 0) != 0,
                        I("right", 0) != 0};
    if (z.generators < 1) throw InvalidInput(uri + ": gens must be at least 1");
    build_zigzag(z);  // validates placement
    return detail::from_sum({z}, minimal_grid(z), describe(z));
  }
  if (rest == "shapes") {
    const Grid g = grid_of(3);
    return detail::from_sum(enumerate_shapes(g), g, "all shapes on " + std::to_string(g.P) + "x" + std::to_string(g.Q));
  }
  if (rest == "ce11" || rest == "ce01" || rest == "calabi-eckmann") {
    int u = rest == "ce11" ? 1 : 0, v = 1;
    u = I("u", u);
    v = I("v", v);
    std::optional<int> w;
    if (params.count("w")) w = I("w", 0);
    ExampleComplex ex;
    ex.complex = example_calabi_eckmann(u, v, w).complex;
    return ex;
  }
  if (rest == "random") {
    const Grid g = grid_of(4);
    const int dim = I("dim", 3), shapes = I("shapes", 8);
    if (dim < 0 || shapes < 0) throw InvalidInput(uri + ": dim and shapes must be nonnegative");
    const RandomComplex rc = random_direct_sum(g, static_cast<std::size_t>(dim), static_cast<std::size_t>(shapes), seed_of());
    ExampleComplex ex;
    ex.complex = rc.complex;
    ex.certificate = certificate_for_sum(rc.summands, rc.transforms);
    return ex;
  }
  if (rest == "self-dual") {
    const Grid g = grid_of(3);
    const int dim = I("dim", 2);
    if (dim < 0) throw InvalidInput(uri + ": dim must be nonnegative");
    const RandomComplex rc = random_direct_sum(g, static_cast<std::size_t>(dim), 4, seed_of(), false);
    const PairedComplex pc = with_dual(rc.complex);
    ExampleComplex ex;
    ex.complex = pc.complex;
    ex.complex.set_name("self-dual(seed=" + std::to_string(seed_of()) + ")");
    ex.pairing = pc.pairing;
    return ex;
  }
  throw InvalidInput("unknown example '" + rest + "'");
}

// A file path or example URI; CDGA descriptions are built on the fly.
inline ExampleComplex load_input(const std::string& source, std::uint64_t seed = 1) {
  if (source.rfind("example://", 0) == 0) return example_complex(source, seed);
  const Json j = load_json_file(source);
  ExampleComplex ex;
  if (is_cdga_json(j)) {
    ex.complex = build_cdga(cdga_from_json(j));
    if (ex.complex.name().empty()) ex.complex.set_name(source);
  } else {
    ex.complex = complex_from_json(j);
  }
  return ex;
}

}  // namespace ddbar
