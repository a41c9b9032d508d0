#include "lat2d/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <set>

#include "lat2d/examples.hpp"
#include "lat2d/peps.hpp"
#include "lat2d/rmatrix.hpp"
#include "lat2d/uqsu2.hpp"

namespace lat2d {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kUqChecks = {"ks",        "commutator", "kernel", "singlets",      "families",
                                         "rmatrix",   "rmatrix2d",  "chain",  "semiclassical", "classical"};
// Checks that divide by q - 1/q.
const std::set<std::string> kNonsingularChecks = {"commutator", "kernel", "singlets"};
const std::set<std::string> kPropositionExamples = {"group-like", "lie-like", "uq"};
const std::vector<std::string> kPepsReps = {"d4", "d4-amended", "d2"};

json q_json(cplx q) { return json::array({q.real(), q.imag()}); }

cplx q_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_q(j.get<std::string>());
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError("q must be a number, a string or an [re, im] pair");
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << j.dump(2) << "\n";
}

fs::path prepare_out(const RunConfig& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + c.out);
  return dir;
}

std::string status(bool pass) { return pass ? "PASS" : "FAIL"; }

std::vector<std::string> unique_in_order(const std::vector<std::string>& v) {
  std::vector<std::string> out;
  for (const auto& s : v)
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  return out;
}

std::vector<std::string> default_checks(const CoalgebraExample& ex) {
  std::vector<std::string> c = {"assoc", "counit", "xycompat"};
  if (ex.representation && (ex.antipode_x || ex.antipode_y)) c.push_back("antipode");
  if (ex.representation && !ex.relations.empty()) c.push_back("homomorphism");
  return c;
}

CoalgebraExample example_for(const RunConfig& c, cplx q) {
  json e = {{"example", c.example}, {"theta_over_pi", c.theta_over_pi}, {"n", c.taft_n}};
  e["q_re"] = q.real();
  e["q_im"] = q.imag();
  return make_example(e);
}

std::vector<int> distinct(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<int> lengths(const std::vector<Shape>& sizes, Dir d) {
  std::vector<int> v;
  for (const auto& s : sizes) v.push_back(d == Dir::X ? s.rows : s.cols);
  return distinct(v);
}

std::vector<SweedlerTerm> group_like_delta(const std::string& s) { return {{1.0, s, s}}; }

std::vector<SweedlerTerm> lie_like_delta(const std::string& s) {
  if (s == "1") return {{1.0, "1", "1"}};
  return {{1.0, "1", s}, {1.0, s, "1"}};
}

std::vector<SweedlerTerm> uq_site_delta(const std::string& s) {
  if (s == "S+" || s == "S-") return {{1.0, s, "K+"}, {1.0, "K-", s}};
  return {{1.0, s, s}};
}

CheckReport kernel_check(const KernelReport& k, double tol) {
  CheckReport r;
  r.check = "kernel_2x2";
  r.add_size({2, 2});
  r.add("joint kernel dimension " + std::to_string(k.dim), std::abs(k.dim - 2), 0.0);
  r.add("horizontal singlets annihilated", k.horizontal_residual, tol);
  r.add("crossed singlets annihilated", k.crossed_residual, tol);
  for (std::size_t i = 0; i < k.family_residuals.size(); ++i) {
    r.add("family " + std::to_string(i) + " annihilated", k.family_residuals[i], tol);
    r.add("family " + std::to_string(i) + " in kernel", k.family_kernel_distance[i], tol);
  }
  r.add("vertical singlet coefficient", std::abs(k.vertical_coefficient - k.vertical_expected), tol);
  r.add("vertical singlet image support", k.vertical_support_ok ? 0.0 : 1.0, 0.0);
  return r;
}

// One check over all configured instances; returns (passed, results).
struct CheckRun {
  bool passed = true;
  json results = json::array();

  void add(json item, const CheckReport& r) {
    item["report"] = to_json(r);
    passed = passed && r.passed();
    results.push_back(std::move(item));
  }
};

CheckRun run_check(const std::string& name, const RunConfig& c, const std::vector<cplx>& qs,
                   const std::vector<Shape>& sizes) {
  CheckRun run;
  const bool is_uq = c.example == "uq";
  const double tol = c.tol;
  const double tight = std::min(tol, 1e-12);
  // q-independent checks of the uq family run once.
  if (name == "rmatrix") {
    run.add({}, check_r_forms(qs, tight));
    run.add({}, check_intertwining_1d(qs, tight));
    return run;
  }
  if (name == "rmatrix2d") {
    run.add({}, check_intertwining_2d(qs, tol));
    return run;
  }
  if (name == "chain") {
    for (const char* g : {"S+", "S-"}) run.add({{"generator", g}}, check_chain(g, qs, tol));
    return run;
  }
  if (name == "semiclassical") {
    json fits = {to_json(semiclassical_fit_1d(kSemiclassicalH)), to_json(semiclassical_fit_2d(kSemiclassicalH))};
    run.add({{"fits", fits}}, check_semiclassical(kSemiclassicalH));
    return run;
  }
  if (name == "classical") {
    run.add({}, check_classical_identities(tight));
    return run;
  }
  if (name == "cube") {
    for (const char* s : {"a", "b", "v"}) run.add({{"symbol", s}}, cube_xyz_compat(s, tol));
    return run;
  }
  if (name == "proposition") {
    PropositionReport p;
    if (c.example == "group-like") {
      auto ex = example_for(c, 2.0);
      p = check_trivial_proposition(group_like_delta, group_like_delta, ex.alphabet, tol);
    } else if (c.example == "lie-like") {
      p = check_trivial_proposition(lie_like_delta, lie_like_delta, {"1", "a", "b"}, tol);
    } else {
      p = check_trivial_proposition(uq_site_delta, uq_site_delta, {"S+", "S-", "K+", "K-"}, tol);
    }
    // The proposition itself holds when the premise implies the conclusion.
    CheckReport verdict;
    verdict.check = "proposition";
    verdict.add("premise implies conclusion", (!p.premise_holds || p.conclusion_holds) ? 0.0 : 1.0, 0.0);
    run.add({{"premise_holds", p.premise_holds},
             {"conclusion_holds", p.conclusion_holds},
             {"premise", to_json(p.premise)},
             {"conclusion", to_json(p.conclusion)}},
            verdict);
    return run;
  }

  const std::vector<cplx> per_q = is_uq ? qs : std::vector<cplx>{cplx(2.0)};
  for (cplx q : per_q) {
    json base = json::object();
    if (is_uq) base["q"] = q_json(q);
    if (name == "kernel") {
      auto k = kernel_2x2(q);
      json item = base;
      item["details"] = to_json(k);
      run.add(item, kernel_check(k, tol));
      continue;
    }
    if (name == "singlets") {
      run.add(base, check_singlet_identities(q, tol));
      continue;
    }
    if (name == "families") {
      auto lens = lengths(sizes, Dir::X);
      for (int len : lengths(sizes, Dir::Y)) lens.push_back(len);
      for (int n : distinct(lens)) {
        json item = base;
        item["len"] = n;
        run.add(item, check_counit_antipode_families(q, n, tol));
      }
      continue;
    }
    if (name == "ks" || name == "commutator" || name == "xycompat" || name == "homomorphism") {
      const auto ex = (name == "xycompat" || name == "homomorphism") ? example_for(c, q) : CoalgebraExample{};
      std::optional<Representation> rep;
      if (name == "homomorphism") rep = ex.representation();
      for (const auto& s : sizes) {
        json item = base;
        item["size"] = to_string(s);
        if (name == "ks") run.add(item, check_ks_relation(q, s.rows, s.cols, tol));
        if (name == "commutator") run.add(item, check_commutator(q, s.rows, s.cols, tol));
        if (name == "xycompat") run.add(item, check_xy_compat(ex, s.rows, s.cols, tol));
        if (name == "homomorphism") run.add(item, check_homomorphism(ex, *rep, s.rows, s.cols, {}, tol));
      }
      continue;
    }
    // assoc, counit, antipode: boundary words of every configured length.
    const auto ex = example_for(c, q);
    std::optional<Representation> rep;
    if (name == "antipode") rep = ex.representation();
    for (Dir d : {Dir::X, Dir::Y}) {
      if (name == "antipode" && !(d == Dir::X ? ex.antipode_x : ex.antipode_y)) continue;
      for (int len : lengths(sizes, d)) {
        json item = base;
        item["dir"] = to_string(d);
        item["len"] = len;
        if (name == "assoc") run.add(item, check_quasi_1d_assoc(ex, d, len, {}, tol));
        if (name == "counit") run.add(item, check_counit(ex, d, len, {}, tol));
        if (name == "antipode") run.add(item, check_antipode(ex, *rep, d, len, {}, tol));
      }
    }
  }
  return run;
}

std::vector<Shape> verify_sizes(const RunConfig& c) {
  return c.sizes.empty() ? std::vector<Shape>{{2, 2}} : c.sizes;
}

std::vector<Shape> peps_sizes(const RunConfig& c) {
  if (!c.sizes.empty()) return c.sizes;
  return {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {2, 3}, {3, 2}, {3, 3}};
}

PepsInstance peps_instance(const std::string& rep) {
  if (rep == "d4") return d4_instance();
  if (rep == "d4-amended") return d4_amended_instance();
  return d2_instance();
}

std::optional<int> mutation_index(const std::string& m) {
  static const std::regex drop(R"(drop:(\d+))");
  std::smatch match;
  if (std::regex_match(m, match, drop)) return std::stoi(match[1]);
  return std::nullopt;
}

std::string file_tag(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '+') out += 'p';
    else if (ch == '-') out += 'm';
    else if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.') out += ch;
    else out += '_';
  }
  return out;
}

// The output directory is left out so that reports do not depend on where they are written.
json report_header(const RunConfig& c) {
  json cfg = to_json(c);
  cfg.erase("out");
  return {{"config", cfg}, {"seed", c.seed}};
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

cplx parse_q(const std::string& text) {
  static const std::regex re(R"(\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?:([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*i)?\s*)");
  static const std::regex pure_imag(R"(\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*i\s*)");
  std::smatch m;
  if (std::regex_match(text, m, pure_imag)) {
    std::string im = m[1].matched ? m[1].str() : "1";
    if (im == "+" || im == "-") im += "1";
    return {0.0, std::stod(im)};
  }
  if (!text.empty() && std::regex_match(text, m, re) && m[1].matched) {
    double re_part = std::stod(m[1]);
    double im_part = 0.0;
    if (m[2].matched) im_part = (m[2] == "-" ? -1.0 : 1.0) * (m[3].matched ? std::stod(m[3]) : 1.0);
    return {re_part, im_part};
  }
  throw ConfigError("cannot parse q value '" + text + "'");
}

std::string format_q(cplx q) {
  auto num = [](double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  };
  if (q.imag() == 0.0) return num(q.real());
  return num(q.real()) + (q.imag() < 0 ? "-" : "+") + num(std::abs(q.imag())) + "i";
}

RunConfig run_config_from_json(const json& j, RunConfig c) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  static const std::set<std::string> known = {
      "command", "example", "theta_over_pi", "taft_n", "q",   "random_q",       "sizes",  "checks", "out",
      "tol",     "seed",    "gen",           "rmatrix", "rmatrix2d", "rep", "solve_boundary", "mutate"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("unknown configuration key '" + key + "'");
  try {
    if (j.contains("command")) c.command = j["command"].get<std::string>();
    if (j.contains("example")) c.example = j["example"].get<std::string>();
    if (j.contains("theta_over_pi")) c.theta_over_pi = j["theta_over_pi"].get<double>();
    if (j.contains("taft_n")) c.taft_n = j["taft_n"].get<int>();
    if (j.contains("q")) {
      c.q.clear();
      const json& q = j["q"];
      if (q.is_array()) {
        for (const auto& e : q) c.q.push_back(q_from_json(e));
      } else {
        c.q.push_back(q_from_json(q));
      }
    }
    if (j.contains("random_q")) c.random_q = j["random_q"].get<int>();
    if (j.contains("sizes")) {
      c.sizes.clear();
      for (const auto& s : j["sizes"]) c.sizes.push_back(parse_shape(s.get<std::string>()));
    }
    if (j.contains("checks")) c.checks = j["checks"].get<std::vector<std::string>>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<unsigned long long>();
    if (j.contains("gen")) c.gen = j["gen"].get<std::vector<std::string>>();
    if (j.contains("rmatrix")) c.rmatrix = j["rmatrix"].get<bool>();
    if (j.contains("rmatrix2d")) c.rmatrix2d = j["rmatrix2d"].get<bool>();
    if (j.contains("rep")) c.rep = j["rep"].get<std::string>();
    if (j.contains("solve_boundary")) c.solve_boundary = j["solve_boundary"].get<bool>();
    if (j.contains("mutate")) c.mutate = j["mutate"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  } catch (const ShapeError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

json to_json(const RunConfig& c) {
  json q = json::array();
  for (cplx v : c.q) q.push_back(q_json(v));
  json sizes = json::array();
  for (const auto& s : c.sizes) sizes.push_back(to_string(s));
  return {{"command", c.command}, {"example", c.example}, {"theta_over_pi", c.theta_over_pi},
          {"taft_n", c.taft_n},   {"q", q},               {"random_q", c.random_q},
          {"sizes", sizes},       {"checks", c.checks},   {"out", c.out},
          {"tol", c.tol},         {"seed", c.seed},       {"gen", c.gen},
          {"rmatrix", c.rmatrix}, {"rmatrix2d", c.rmatrix2d}, {"rep", c.rep},
          {"solve_boundary", c.solve_boundary}, {"mutate", c.mutate}};
}

std::vector<cplx> q_values(const RunConfig& c) {
  std::vector<cplx> qs = c.q;
  if (c.random_q > 0) {
    auto r = seeded_qs(c.seed, c.random_q);
    qs.insert(qs.end(), r.begin(), r.end());
  }
  return qs;
}

const std::vector<std::string>& verify_check_names() {
  static const std::vector<std::string> names = {
      "assoc",   "counit",    "xycompat", "antipode",      "homomorphism", "ks",          "commutator", "kernel", "singlets",
      "families", "rmatrix", "rmatrix2d", "chain", "semiclassical", "classical", "proposition", "cube"};
  return names;
}

void validate(const RunConfig& c) {
  if (!(c.tol > 0.0) || !std::isfinite(c.tol)) throw ConfigError("tolerance must be positive and finite");
  if (c.random_q < 0 || c.random_q > 1000) throw ConfigError("random_q must be in [0, 1000]");
  for (const auto& s : c.sizes)
    if (s.rows < 1 || s.cols < 1) throw ConfigError("lattice sizes must be positive");
  const auto qs = q_values(c);
  for (cplx q : qs) require_nonzero(q);

  if (c.command == "verify") {
    const auto names = example_names();
    if (std::find(names.begin(), names.end(), c.example) == names.end())
      throw ConfigError("unknown example '" + c.example + "'");
    if (c.example != "uq" && !qs.empty()) throw ConfigError("q values apply to the uq example only");
    if (c.example == "uq" && qs.empty()) throw ConfigError("the uq example needs at least one q (--q or --random-q)");
    if (c.example == "taft" && c.taft_n < 2) throw ConfigError("taft needs n >= 2");
    for (const auto& s : verify_sizes(c))
      if (s.rows * s.cols > 16) throw ResourceError("verify sizes are limited to n*m <= 16");
    const auto ex = example_for(c, qs.empty() ? cplx(2.0) : qs.front());
    for (const auto& name : c.checks) {
      const auto& all = verify_check_names();
      if (std::find(all.begin(), all.end(), name) == all.end()) throw ConfigError("unknown check '" + name + "'");
      if (kUqChecks.count(name) && c.example != "uq")
        throw ConfigError("check '" + name + "' needs --example uq");
      if (name == "proposition" && !kPropositionExamples.count(c.example))
        throw ConfigError("check 'proposition' applies to group-like, lie-like and uq");
      if (name == "cube" && c.example != "pivot") throw ConfigError("check 'cube' applies to the pivot example");
      if ((name == "antipode" || name == "homomorphism") && !ex.representation)
        throw ConfigError("example '" + c.example + "' has no representation for '" + name + "'");
      if (name == "antipode" && !ex.antipode_x && !ex.antipode_y)
        throw ConfigError("example '" + c.example + "' has no antipode");
      if (kNonsingularChecks.count(name))
        for (cplx q : qs) require_nonsingular(q);
      if ((name == "ks" || name == "commutator" || name == "homomorphism") && c.example == "uq")
        for (const auto& s : verify_sizes(c))
          if (s.rows * s.cols > 12) throw ResourceError("lattice operators are limited to n*m <= 12");
    }
    return;
  }
  if (c.command == "build-op") {
    if (qs.empty()) throw ConfigError("build-op needs at least one q");
    if (c.gen.empty() && !c.rmatrix && !c.rmatrix2d) throw ConfigError("build-op needs --gen, --rmatrix or --rmatrix2d");
    const auto alphabet = spin_half_rep(qs.front()).as_representation().alphabet;
    for (const auto& g : c.gen)
      if (std::find(alphabet.begin(), alphabet.end(), g) == alphabet.end())
        throw ConfigError("unknown generator '" + g + "'");
    for (const auto& s : c.sizes) {
      if (s.rows * s.cols > 12)
        throw ResourceError("operator " + to_string(s) + " exceeds the dimension cap " + std::to_string(kBoxplusDimCap));
    }
    return;
  }
  if (c.command == "peps") {
    if (std::find(kPepsReps.begin(), kPepsReps.end(), c.rep) == kPepsReps.end())
      throw ConfigError("unknown PEPS representation '" + c.rep + "'");
    if (c.rep == "d2" && !c.solve_boundary) throw ConfigError("the d2 boundary is incomplete; pass --solve-boundary");
    if (c.solve_boundary && c.rep != "d2") throw ConfigError("--solve-boundary applies to --rep d2");
    if (!c.mutate.empty()) {
      if (c.solve_boundary) throw ConfigError("--mutate cannot be combined with --solve-boundary");
      auto k = mutation_index(c.mutate);
      if (!k && c.mutate != "scan") throw ConfigError("--mutate takes drop:K or scan");
      if (k && *k >= static_cast<int>(peps_instance(c.rep).tensor.components.size()))
        throw ConfigError("mutation component out of range");
    }
    for (const auto& s : peps_sizes(c))
      if (s.rows * s.cols > kPepsMaxSites) throw ResourceError("PEPS contraction is limited to n*m <= 9");
    return;
  }
  throw ConfigError("unknown command '" + c.command + "'");
}

// ---------------------------------------------------------------------------
// Commands

int cmd_verify(const RunConfig& c, std::ostream& log) {
  validate(c);
  const auto qs = q_values(c);
  const auto sizes = verify_sizes(c);
  const auto dir = prepare_out(c);
  auto checks = unique_in_order(c.checks);
  if (checks.empty()) checks = default_checks(example_for(c, qs.empty() ? cplx(2.0) : qs.front()));

  json summary = report_header(c);
  summary["command"] = "verify";
  summary["checks"] = json::object();
  bool all = true;
  for (const auto& name : checks) {
    auto run = run_check(name, c, qs, sizes);
    json report = report_header(c);
    report["check"] = name;
    report["example"] = c.example;
    report["passed"] = run.passed;
    report["results"] = run.results;
    write_json(dir / (name + ".json"), report);
    summary["checks"][name] = run.passed;
    all = all && run.passed;
    std::size_t instances = 0;
    for (const auto& r : run.results) instances += r["report"]["instances"].size();
    log << status(run.passed) << "  " << name << "  (" << instances << " instances)\n";
  }
  summary["passed"] = all;
  write_json(dir / "summary.json", summary);
  return all ? kExitPass : kExitFail;
}

int cmd_build_op(const RunConfig& c, std::ostream& log) {
  validate(c);
  const auto qs = q_values(c);
  const auto dir = prepare_out(c);
  const std::vector<Shape> sizes = c.sizes.empty() ? std::vector<Shape>{{2, 2}} : c.sizes;
  json ops = json::array();
  auto emit = [&](const std::string& generator, cplx q, Shape s, const SparseOperator& op, const std::string& file) {
    std::ofstream os(dir / file, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + (dir / file).string());
    write_matrix_market(os, op);
    ops.push_back({{"generator", generator},
                   {"q", q_json(q)},
                   {"n", s.rows},
                   {"m", s.cols},
                   {"dim", op.dim()},
                   {"nnz", op.nnz()},
                   {"file", file}});
    log << "wrote " << file << "  (" << op.dim() << "x" << op.dim() << ", " << op.nnz() << " nonzeros)\n";
  };
  for (cplx q : qs) {
    const std::string qtag = "q" + file_tag(format_q(q));
    for (const auto& g : c.gen)
      for (const auto& s : sizes)
        emit(g, q, s, boxplus_op(g, q, s.rows, s.cols),
             "boxplus_" + file_tag(g) + "_" + to_string(s) + "_" + qtag + ".mtx");
    if (c.rmatrix) emit("R", q, {1, 2}, SparseOperator::from_dense(r_matrix(q)), "rmatrix_" + qtag + ".mtx");
    if (c.rmatrix2d) emit("R2d", q, {2, 2}, SparseOperator::from_dense(r2d(q)), "rmatrix2d_" + qtag + ".mtx");
  }
  json manifest = report_header(c);
  manifest["operators"] = ops;
  write_json(dir / "manifest.json", manifest);
  return kExitPass;
}

int cmd_peps(const RunConfig& c, std::ostream& log) {
  validate(c);
  const auto dir = prepare_out(c);
  const auto ex = make_pivot();
  auto inst = peps_instance(c.rep);
  json report = report_header(c);
  report["rep"] = c.rep;

  if (c.solve_boundary) {
    auto r = c.sizes.empty() ? solve_boundary(inst, ex, "v", {}, c.tol) : solve_boundary(inst, ex, "v", c.sizes, c.tol);
    write_json(dir / "d2_boundary_report.json", to_json(r));
    bool certified = false;
    for (const auto& g : r.general)
      if (!g.feasible && g.certificate_orthogonality <= c.tol && g.certificate_pairing > c.tol) certified = true;
    const bool ok = r.feasible ? (r.completion_check && r.completion_check->passed()) : certified;
    report["feasible"] = r.feasible;
    report["certified_infeasible"] = !r.feasible && certified;
    report["conclusion"] = r.conclusion;
    report["passed"] = ok;
    write_json(dir / "peps_d2.json", report);
    log << (r.feasible ? "feasible: " : (certified ? "certified infeasible: " : "unresolved: ")) << r.conclusion
        << "\n";
    return ok ? kExitPass : kExitFail;
  }

  const auto sizes = peps_sizes(c);
  if (c.mutate == "scan") {
    auto scan = mutation_scan(inst, ex, "v", sizes, c.tol);
    json rows = json::array();
    bool all = true;
    for (const auto& m : scan) {
      rows.push_back({{"component", m.component},
                      {"first_detected", m.first_detected ? json(to_string(*m.first_detected)) : json(nullptr)}});
      all = all && m.first_detected.has_value();
      log << "component " << m.component << ": "
          << (m.first_detected ? "detected at " + to_string(*m.first_detected) : std::string("not detected")) << "\n";
    }
    report["mutations"] = rows;
    report["passed"] = all;
    write_json(dir / ("mutation_scan_" + c.rep + ".json"), report);
    return all ? kExitPass : kExitFail;
  }

  auto k = mutation_index(c.mutate);
  if (k) inst = drop_component(inst, *k);
  auto check = check_peps_vs_boxplus(inst, ex, "v", sizes, c.tol);
  report["mutation"] = k ? json(*k) : json(nullptr);
  report["report"] = to_json(check);
  report["passed"] = check.passed();
  write_json(dir / ("peps_" + c.rep + (k ? "_drop" + std::to_string(*k) : std::string()) + ".json"), report);
  for (const auto& i : check.instances) log << status(i.pass) << "  " << i.input << (i.note.empty() ? "" : "  " + i.note) << "\n";
  return check.passed() ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// Argument parsing

namespace {

struct Flags {
  std::string config, example, out, rep, mutate;
  double theta = 0.0, tol = 0.0;
  int taft_n = 0, random_q = 0;
  unsigned long long seed = 0;
  std::vector<std::string> q, sizes, checks, gen;
  std::string size;
  bool rmatrix = false, rmatrix2d = false, solve = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON configuration file (flags override it)");
  app->add_option("--q", f.q, "q value, e.g. 2, 0.8+0.6i (repeatable)")->delimiter(',');
  app->add_option("--random-q", f.random_q, "number of additional seeded q values");
  app->add_option("--sizes", f.sizes, "lattice sizes NxM (comma list)")->delimiter(',');
  app->add_option("--out", f.out, "output directory");
  app->add_option("--tol", f.tol, "comparison tolerance");
  app->add_option("--seed", f.seed, "seed for randomized instances (default 42)");
}

// Flags given on the command line, as configuration JSON.
json given_flags(const CLI::App* app, const Flags& f) {
  json j = json::object();
  auto given = [&](const char* name) {
    try {
      return app->get_option(name)->count() > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  if (given("--example")) j["example"] = f.example;
  if (given("--theta-over-pi")) j["theta_over_pi"] = f.theta;
  if (given("--taft-n")) j["taft_n"] = f.taft_n;
  if (given("--q")) j["q"] = f.q;
  if (given("--random-q")) j["random_q"] = f.random_q;
  if (given("--sizes")) j["sizes"] = f.sizes;
  if (given("--size")) j["sizes"] = json::array({f.size});
  if (given("--checks")) j["checks"] = f.checks;
  if (given("--out")) j["out"] = f.out;
  if (given("--tol")) j["tol"] = f.tol;
  if (given("--seed")) j["seed"] = f.seed;
  if (given("--gen")) j["gen"] = f.gen;
  if (given("--rmatrix")) j["rmatrix"] = f.rmatrix;
  if (given("--rmatrix2d")) j["rmatrix2d"] = f.rmatrix2d;
  if (given("--rep")) j["rep"] = f.rep;
  if (given("--solve-boundary")) j["solve_boundary"] = f.solve;
  if (given("--mutate")) j["mutate"] = f.mutate;
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-dimensional coalgebra checks, lattice operators and PEPS contraction", "lat2d"};
  app.require_subcommand(1);
  Flags f;

  auto* verify = app.add_subcommand("verify", "run check suites and write one JSON report per check");
  add_common(verify, f);
  verify->add_option("--example", f.example, "example: " + [] {
    std::string s;
    for (const auto& n : example_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }());
  verify->add_option("--checks", f.checks, "checks (comma list)")->delimiter(',');
  verify->add_option("--theta-over-pi", f.theta, "pivot rotation angle in units of pi");
  verify->add_option("--taft-n", f.taft_n, "Taft algebra order n");

  auto* build = app.add_subcommand("build-op", "write lattice operators as Matrix Market files");
  add_common(build, f);
  build->add_option("--gen", f.gen, "generator(s) of the U_q alphabet")->delimiter(',');
  build->add_option("--size", f.size, "lattice size NxM");
  build->add_flag("--rmatrix", f.rmatrix, "also write the two-site R-matrix");
  build->add_flag("--rmatrix2d", f.rmatrix2d, "also write the four-site plaquette R-matrix");

  auto* peps = app.add_subcommand("peps", "contract the PEPS representations and compare with the coproduct");
  add_common(peps, f);
  peps->add_option("--rep", f.rep, "d4, d4-amended or d2");
  peps->add_flag("--solve-boundary", f.solve, "complete the d2 boundary or certify infeasibility");
  peps->add_option("--mutate", f.mutate, "drop:K removes component K; scan tries every component");

  std::vector<std::string> argv_store = {"lat2d"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    json merged = json::object();
    if (!f.config.empty()) {
      std::ifstream is(f.config);
      if (!is) throw ConfigError("cannot read configuration file " + f.config);
      try {
        merged = json::parse(is);
      } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid configuration file: ") + e.what());
      }
      if (!merged.is_object()) throw ConfigError("configuration file must hold a JSON object");
    }
    merged.update(given_flags(sub, f));
    merged["command"] = sub->get_name();
    RunConfig c = run_config_from_json(merged);
    if (c.command == "verify") return cmd_verify(c, out);
    if (c.command == "build-op") return cmd_build_op(c, out);
    return cmd_peps(c, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceError& e) {
    err << "size limit: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ShapeError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const RangeError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const RepresentationError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "check failed: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace lat2d
