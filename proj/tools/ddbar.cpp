// ddbar command-line front end.
//
// Exit codes: 0 success, 1 validation or consistency failure, 2 usage error.
// Failures print a single-line JSON object {"error": {...}} on stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ddbar/report.hpp"

namespace {

using namespace ddbar;

struct Options {
  std::string input;
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 1;
  int rmax = 0;
  int r = 2;
  bool show_reps = false;
  bool explain = false;
  bool constructive = false;
  bool oracle = false;
  std::string gram;
  std::string pairing;
  std::string certificate_out;
  // example
  std::string kind;
  int u = 1, v = 1, w = 0;
  std::string at = "0,0", start = "0,0", grid = "4,4";
  int gens = 1, left = 0, right = 0, dim = 3, shapes = 8;
  bool cdga = false;
  std::string pairing_out;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit_error(const std::string& kind, const std::string& message, const Json& extra = Json()) {
  Json e{{"kind", kind}, {"message", message}};
  if (!extra.is_null()) e["diagnostic"] = extra;
  std::cerr << Json{{"error", e}}.dump() << "\n";
}

void write_output(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InvalidInput("cannot write '" + o.out + "'");
  f << text;
}

void emit(const Options& o, const Report& rep) {
  const Json j = rep.to_json();
  write_output(o, o.format == "md" ? render_markdown(j) : j.dump(2) + "\n");
}

int effective_rmax(const Options& o, const DoubleComplex& c) {
  if (o.rmax < 0) throw UsageError("--rmax must be positive");
  return o.rmax > 0 ? o.rmax : default_rmax(c);
}

// Terms of a witness in the basis labels, when the complex carries them.
void label_witness(const DoubleComplex& c, Json& verdicts) {
  for (auto& chk : verdicts["checks"]) {
    if (!chk.contains("witness")) continue;
    Json& w = chk["witness"];
    const auto& labels = c.labels(w["at"][0].get<int>(), w["at"][1].get<int>());
    if (labels.empty()) continue;
    std::string s;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const std::string coef = w["form"][i].get<std::string>();
      if (coef == "0") continue;
      if (!s.empty()) s += " + ";
      s += coef == "1" ? labels[i] : "(" + coef + ")*" + labels[i];
    }
    w["terms"] = s;
  }
}

InnerProduct load_gram(const Options& o, const DoubleComplex& c) {
  if (o.gram.empty()) return InnerProduct{};
  return inner_product_from_json(load_json_file(o.gram), c);
}

DualityPairing load_pairing(const Options& o, const ExampleComplex& ex) {
  if (!o.pairing.empty()) return pairing_from_json(load_json_file(o.pairing), ex.complex);
  if (ex.pairing) return *ex.pairing;
  throw UsageError("duality needs --pairing (or a self-dual example)");
}

Report base_report(const DoubleComplex& c) {
  Report rep;
  rep.complex = complex_metadata(c);
  return rep;
}

int cmd_validate(const Options& o) {
  const ExampleComplex ex = load_input(o.input, o.seed);
  const ValidationReport v = validate(ex.complex);
  Report rep;
  DimGrid dims(ex.complex.grid());
  for (const auto& [p, q] : ex.complex.bidegrees()) dims.at(p, q) = ex.complex.dim(p, q);
  rep.complex = {{"name", ex.complex.name()},
                 {"grid", {ex.complex.grid().P, ex.complex.grid().Q}},
                 {"dims", grid_to_json(dims)},
                 {"total_dim", ex.complex.total_dim()},
                 {"betti", Json::array()}};
  Json s{{"valid", v.ok()}, {"violations", Json::array()}};
  for (const auto& x : v.violations)
    s["violations"].push_back(x.identity + " != 0 at (" + to_string(x.at) + ")");
  if (v.ok()) rep.complex["betti"] = de_rham_dims(total_complex(ex.complex));
  rep.sections["validation"] = s;
  emit(o, rep);
  return v.ok() ? 0 : 1;
}

int cmd_pages(const Options& o) {
  const ExampleComplex ex = load_input(o.input, o.seed);
  Report rep = base_report(ex.complex);
  rep.sections["pages"] = pages_section(ex.complex, effective_rmax(o, ex.complex), o.show_reps, o.oracle);
  emit(o, rep);
  if (rep.sections["pages"].value("oracle_agrees", true) == false)
    throw ConsistencyError("pages disagree with the iterated-page oracle");
  return 0;
}

int cmd_bca(const Options& o) {
  const ExampleComplex ex = load_input(o.input, o.seed);
  Report rep = base_report(ex.complex);
  rep.sections["bca"] = bca_section(ex.complex, effective_rmax(o, ex.complex));
  emit(o, rep);
  return 0;
}

int cmd_check(const Options& o) {
  if (o.r < 1) throw UsageError("--r must be at least 1");
  const ExampleComplex ex = load_input(o.input, o.seed);
  Report rep = base_report(ex.complex);
  std::optional<MultiplicityResult> m;
  if (!ex.complex.certified_max_p()) m = multiplicity_solve(ex.complex);
  Json s = verdicts_section(ex.complex, o.r, o.r, o.explain, m ? &*m : nullptr);
  label_witness(ex.complex, s);
  rep.sections["verdicts"] = s;
  emit(o, rep);
  return 0;
}

int cmd_hodge(const Options& o) {
  const ExampleComplex ex = load_input(o.input, o.seed);
  Report rep = base_report(ex.complex);
  rep.sections["hodge"] = hodge_section(ex.complex, load_gram(o, ex.complex), effective_rmax(o, ex.complex));
  emit(o, rep);
  return rep.sections["hodge"]["ok"].get<bool>() ? 0 : 1;
}

int cmd_decompose(const Options& o) {
  if (o.constructive) {
    emit_error("unsupported", "the constructive splitter is not available; the default engine solves the invariant system");
    return 2;
  }
  const ExampleComplex ex = load_input(o.input, o.seed);
  if (ex.complex.certified_max_p())
    throw InvalidInput("decompose needs a complete complex; truncated models are only certified up to p = " +
                       std::to_string(*ex.complex.certified_max_p()));
  Report rep = base_report(ex.complex);
  const MultiplicityResult m = multiplicity_solve(ex.complex, o.rmax);
  const DecompositionCertificate* cert = ex.certificate ? &*ex.certificate : nullptr;
  rep.sections["decomposition"] = decomposition_section(m, cert, &ex.complex);
  if (!o.certificate_out.empty()) {
    if (!cert) throw InvalidInput("no certificate is known for this input");
    std::ofstream f(o.certificate_out, std::ios::binary);
    if (!f) throw InvalidInput("cannot write '" + o.certificate_out + "'");
    f << certificate_to_json(*cert).dump(2) << "\n";
  }
  emit(o, rep);
  return 0;
}

int cmd_duality(const Options& o) {
  const ExampleComplex ex = load_input(o.input, o.seed);
  const DualityPairing pr = load_pairing(o, ex);
  Report rep = base_report(ex.complex);
  rep.sections["duality"] = duality_section(ex.complex, pr, effective_rmax(o, ex.complex));
  emit(o, rep);
  return rep.sections["duality"]["valid"].get<bool>() ? 0 : 1;
}

int cmd_report(const Options& o) {
  const ExampleComplex ex = load_input(o.input, o.seed);
  const DoubleComplex& c = ex.complex;
  const int R = effective_rmax(o, c);
  Report rep = base_report(c);
  rep.sections["pages"] = pages_section(c, R, o.show_reps, !c.certified_max_p());
  rep.sections["bca"] = bca_section(c, R);
  if (c.certified_max_p()) {
    Json s = verdicts_section(c, 1, R, o.explain);
    label_witness(c, s);
    rep.sections["verdicts"] = s;
  } else {
    const MultiplicityResult m = multiplicity_solve(c);
    Json s = verdicts_section(c, 1, R, o.explain, &m);
    label_witness(c, s);
    rep.sections["verdicts"] = s;
    rep.sections["hodge"] = hodge_section(c, load_gram(o, c), R);
    rep.sections["decomposition"] = decomposition_section(m, ex.certificate ? &*ex.certificate : nullptr, &c);
  }
  if (!o.pairing.empty() || ex.pairing) rep.sections["duality"] = duality_section(c, load_pairing(o, ex), R);
  emit(o, rep);
  if (rep.sections["pages"].value("oracle_agrees", true) == false)
    throw ConsistencyError("pages disagree with the iterated-page oracle");
  return 0;
}

Bidegree parse_pair(const std::string& s, const char* flag) {
  try {
    return detail::parse_key(s, flag);
  } catch (const Error&) {
    throw UsageError(std::string(flag) + " expects p,q");
  }
}

int cmd_example(const Options& o) {
  std::string uri;
  if (o.kind == "calabi-eckmann") {
    if (o.cdga) {
      const int W = o.w > 0 ? o.w : calabi_eckmann_default_weight(o.u, o.v);
      write_output(o, cdga_to_json(calabi_eckmann_spec(o.u, o.v, W)).dump(2) + "\n");
      return 0;
    }
    uri = "example://calabi-eckmann?u=" + std::to_string(o.u) + "&v=" + std::to_string(o.v);
    if (o.w > 0) uri += "&w=" + std::to_string(o.w);
  } else if (o.kind == "zigzag") {
    const Bidegree s = parse_pair(o.start, "--start");
    uri = "example://zigzag?start=" + to_string(s) + "&gens=" + std::to_string(o.gens) +
          "&left=" + std::to_string(o.left) + "&right=" + std::to_string(o.right);
  } else if (o.kind == "square") {
    uri = "example://square?at=" + to_string(parse_pair(o.at, "--at"));
  } else if (o.kind == "random" || o.kind == "self-dual") {
    const Bidegree g = parse_pair(o.grid, "--grid");
    uri = "example://" + o.kind + "?P=" + std::to_string(g.p) + "&Q=" + std::to_string(g.q) +
          "&dim=" + std::to_string(o.dim) + "&seed=" + std::to_string(o.seed);
    if (o.kind == "random") uri += "&shapes=" + std::to_string(o.shapes);
  } else if (o.kind == "dot" || o.kind == "shapes" || o.kind == "ce11" || o.kind == "ce01") {
    uri = "example://" + o.kind;
  } else {
    throw UsageError("unknown example kind '" + o.kind + "'");
  }
  const ExampleComplex ex = example_complex(uri, o.seed);
  if (!o.pairing_out.empty()) {
    if (!ex.pairing) throw UsageError("--pairing-out needs a self-dual example");
    std::ofstream f(o.pairing_out, std::ios::binary);
    if (!f) throw InvalidInput("cannot write '" + o.pairing_out + "'");
    f << pairing_to_json(*ex.pairing).dump(2) << "\n";
  }
  write_output(o, complex_to_json(ex.complex).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"ddbar: exact Frölicher, Bott-Chern and Aeppli computations for double complexes over Q"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "md"}));
  app.add_option("--out,-o", o.out, "write output to this file");
  app.add_option("--seed", o.seed, "seed for random examples");
  app.add_option("--rmax", o.rmax, "largest page (default: grid diameter + 1)");

  auto input = [&](CLI::App* s) { s->add_option("input", o.input, "complex file, CDGA file or example:// URI")->required(); };

  auto* validate_cmd = app.add_subcommand("validate", "check d1^2 = d2^2 = d1d2 + d2d1 = 0");
  input(validate_cmd);
  auto* pages_cmd = app.add_subcommand("pages", "Frölicher page dimensions");
  input(pages_cmd);
  pages_cmd->add_flag("--show-reps", o.show_reps, "list representatives of every page");
  pages_cmd->add_flag("--oracle", o.oracle, "cross-check against the iterated-page oracle");
  auto* bca_cmd = app.add_subcommand("bca", "higher-page Bott-Chern and Aeppli dimensions");
  input(bca_cmd);
  auto* check_cmd = app.add_subcommand("check-pageddbar", "page-(r-1) ddbar verdict by every criterion");
  input(check_cmd);
  check_cmd->add_option("--r", o.r, "page index r (the property checked is page r-1)");
  check_cmd->add_flag("--explain", o.explain, "list failed criteria and a witness form");
  auto* hodge_cmd = app.add_subcommand("hodge", "harmonic spaces and 3-space decompositions");
  input(hodge_cmd);
  hodge_cmd->add_option("--gram", o.gram, "Gram matrix file");
  auto* decompose_cmd = app.add_subcommand("decompose", "square and zigzag multiplicities");
  input(decompose_cmd);
  decompose_cmd->add_flag("--constructive", o.constructive, "constructive splitter (not available)");
  decompose_cmd->add_option("--certificate", o.certificate_out, "write the known decomposition certificate");
  auto* duality_cmd = app.add_subcommand("duality", "induced pairings on E_r, BC x A and BC x BC");
  input(duality_cmd);
  duality_cmd->add_option("--pairing", o.pairing, "pairing file");
  auto* report_cmd = app.add_subcommand("report", "run everything");
  input(report_cmd);
  report_cmd->add_flag("--explain", o.explain, "list failed criteria and witnesses");
  report_cmd->add_flag("--show-reps", o.show_reps, "list page representatives");
  report_cmd->add_option("--gram", o.gram, "Gram matrix file");
  report_cmd->add_option("--pairing", o.pairing, "pairing file");
  auto* example_cmd = app.add_subcommand("example", "write a built-in complex as JSON");
  example_cmd->add_option("kind", o.kind, "dot, square, zigzag, shapes, ce11, ce01, calabi-eckmann, random, self-dual")
      ->required();
  example_cmd->add_option("--u", o.u);
  example_cmd->add_option("--v", o.v);
  example_cmd->add_option("--w", o.w, "weight bound for the truncation");
  example_cmd->add_flag("--cdga", o.cdga, "write the CDGA description instead of the matrices");
  example_cmd->add_option("--at", o.at, "square position p,q");
  example_cmd->add_option("--start", o.start, "first generator p,q");
  example_cmd->add_option("--gens", o.gens);
  example_cmd->add_option("--left", o.left)->check(CLI::Range(0, 1));
  example_cmd->add_option("--right", o.right)->check(CLI::Range(0, 1));
  example_cmd->add_option("--grid", o.grid, "P,Q");
  example_cmd->add_option("--dim", o.dim, "largest component dimension");
  example_cmd->add_option("--shapes", o.shapes, "largest number of summands");
  example_cmd->add_option("--pairing-out", o.pairing_out, "also write the pairing of a self-dual example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    return 2;
  }

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "validate") return cmd_validate(o);
    if (cmd == "pages") return cmd_pages(o);
    if (cmd == "bca") return cmd_bca(o);
    if (cmd == "check-pageddbar") return cmd_check(o);
    if (cmd == "hodge") return cmd_hodge(o);
    if (cmd == "decompose") return cmd_decompose(o);
    if (cmd == "duality") return cmd_duality(o);
    if (cmd == "report") return cmd_report(o);
    return cmd_example(o);
  } catch (const UsageError& e) {
    emit_error("usage", e.what());
    return 2;
  } catch (const ConsistencyError& e) {
    Json dump;
    try {
      dump = complex_to_json(load_input(o.input, o.seed).complex);
    } catch (const std::exception&) {
    }
    emit_error(e.kind(), e.what(), dump);
    return 1;
  } catch (const ParseError& e) {
    emit_error(e.kind(), e.what(), Json{{"position", e.position}});
    return 1;
  } catch (const Error& e) {
    emit_error(e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 1;
  }
}
