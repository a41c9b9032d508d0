// Acceptance run: one PASS/FAIL line per criterion.  The process exits 0 when
// the set of failing criteria equals the set given with --expect-fail, so a
// known, documented failure keeps the line red without breaking the build.

#include <CLI11.hpp>

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "lat2d/cli.hpp"
#include "lat2d/examples.hpp"
#include "lat2d/peps.hpp"
#include "lat2d/rmatrix.hpp"
#include "lat2d/uqsu2.hpp"

using namespace lat2d;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    details.push_back(std::string(ok ? "ok: " : "FAILED: ") + what);
  }
};

std::string first_failure(const CheckReport& r) {
  for (const auto& i : r.instances)
    if (!i.pass) return i.input + (i.note.empty() ? "" : " [" + i.note + "]");
  return "";
}

std::string residual(const CheckReport& r) {
  std::ostringstream os;
  auto mr = r.max_residual();
  if (mr)
    os << std::scientific << std::setprecision(1) << *mr;
  else
    os << "n/a";
  return os.str();
}

void require_report(Outcome& o, const std::string& label, const CheckReport& r) {
  o.require(r.passed(), label + " (" + std::to_string(r.instances.size()) + " instances, max residual " +
                            residual(r) + (r.passed() ? "" : "; first failure " + first_failure(r)) + ")");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<SweedlerTerm> uq_site_delta(const std::string& s) {
  if (s == "S+" || s == "S-") return {{1.0, s, "K+"}, {1.0, "K-", s}};
  return {{1.0, s, s}};
}

// ---------------------------------------------------------------------------

Outcome axiom_suite() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  const auto group = cyclic_group_table(3);
  std::vector<std::pair<std::string, CoalgebraExample>> examples = {
      {"group-like", make_group_like(group_elements(group), group)},
      {"lie-like", make_lie_like()},
      {"quasi1d-group", make_quasi1d_group(pivot_inner_coproduct())},
      {"quasi1d-lie", make_quasi1d_lie(pivot_inner_coproduct())},
      {"cross", make_cross()},
      {"pivot(theta=0)", make_pivot({"a", "b", "v", 0.0})},
      {"pivot(theta=pi/4)", make_pivot({"a", "b", "v", 0.25})},
      {"taft(n=2, omega=-1)", make_taft(taft_config(2))},
      {"taft(n=3)", make_taft(taft_config(3))},
      {"uq(q=2)", make_uq_symbolic(2.0)},
  };
  for (const auto& [name, ex] : examples) {
    CheckReport all;
    all.check = name;
    try {
      for (int len = 1; len <= 3; ++len)
        for (Dir d : {Dir::X, Dir::Y}) {
          all.merge(check_quasi_1d_assoc(ex, d, len));
          all.merge(check_counit(ex, d, len));
        }
      for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= 3; ++m) all.merge(check_xy_compat(ex, n, m));
    } catch (const Error& e) {
      all.add("construction", std::nullopt, kDefaultTol, e.what());
    }
    require_report(o, name + ": associativity, counit, xy-compatibility up to 3x3", all);
  }
  double t = seconds_since(t0);
  o.require(t < 30.0, "runtime " + std::to_string(t) + " s < 30 s");
  return o;
}

// Reads the grid in linear site order and accepts exactly a^p v b^q.
std::optional<int> pivot_position(const FormalSum::Cells& cells) {
  int p = 0;
  while (p < static_cast<int>(cells.size()) && cells[p] == "a") ++p;
  if (p == static_cast<int>(cells.size()) || cells[p] != "v") return std::nullopt;
  for (std::size_t k = p + 1; k < cells.size(); ++k)
    if (cells[k] != "b") return std::nullopt;
  return p;
}

Outcome pivot_structure() {
  Outcome o;
  const auto ex = make_pivot();
  int bad = 0;
  std::string first_bad;
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m) {
      const auto s = boxplus(ex, "v", n, m);
      std::set<int> positions;
      bool ok = static_cast<int>(s.size()) == n * m;
      for (const auto& [cells, c] : s.terms()) {
        auto p = pivot_position(cells);
        ok = ok && p && c == cplx(1.0);
        if (p) positions.insert(*p);
      }
      ok = ok && static_cast<int>(positions.size()) == n * m;
      ok = ok && sums_equal(s, pivot_pattern_sum({}, {n, m}), kCanonEps);
      if (!ok && first_bad.empty()) first_bad = std::to_string(n) + "x" + std::to_string(m);
      bad += !ok;
    }
  o.require(bad == 0, "boxplus(v) has n*m coefficient-1 terms a^p v b^(nm-p-1), p = 0..nm-1, for all n, m <= 4" +
                          (first_bad.empty() ? std::string() : "; first mismatch " + first_bad));
  return o;
}

Outcome bialgebra(unsigned long long seed) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  CheckReport ks, comm;
  for (cplx q : seeded_qs(seed, 10))
    for (Shape s : {Shape{2, 2}, Shape{2, 3}, Shape{3, 3}}) {
      ks.merge(check_ks_relation(q, s.rows, s.cols));
      comm.merge(check_commutator(q, s.rows, s.cols));
    }
  require_report(o, "KS relation, 10 seeded q x {2x2, 2x3, 3x3}", ks);
  require_report(o, "telescoping commutator, 10 seeded q x {2x2, 2x3, 3x3}", comm);
  double t = seconds_since(t0);
  o.require(t < 60.0, "runtime " + std::to_string(t) + " s < 60 s");
  return o;
}

Outcome singlets() {
  Outcome o;
  const double tol = 1e-10;
  for (cplx q : {cplx(2.0), cplx(3.0), std::polar(1.0, std::numbers::pi / 5)}) {
    const std::string qs = format_q(q);
    require_report(o, "singlet identities at q = " + qs, check_singlet_identities(q, tol));
    auto k = kernel_2x2(q);
    o.require(k.dim == 2, "joint kernel dimension " + std::to_string(k.dim) + " == 2 at q = " + qs);
    double fam = 0.0;
    for (std::size_t i = 0; i < k.family_residuals.size(); ++i)
      fam = std::max({fam, k.family_residuals[i], k.family_kernel_distance[i]});
    o.require(fam < tol && k.horizontal_residual < tol && k.crossed_residual < tol,
              "alpha/beta family annihilated and inside the kernel at q = " + qs);
    o.require(std::abs(k.vertical_coefficient - k.vertical_expected) < tol && k.vertical_support_ok,
              "vertical singlet coefficient (q^1/2 - q^-1/2)/sqrt(q - 1/q) at q = " + qs);
  }
  double prev = INFINITY;
  bool monotone = true, match = true;
  std::ostringstream seq;
  for (double q : {1.5, 1.1, 1.01}) {
    auto k = kernel_2x2(q);
    double c = std::abs(k.vertical_coefficient);
    match = match && std::abs(k.vertical_coefficient - k.vertical_expected) < tol;
    monotone = monotone && c < prev;
    prev = c;
    seq << " " << c;
  }
  o.require(match && monotone, "vertical residual decreases monotonically towards q = 1:" + seq.str());
  return o;
}

Outcome rmatrix_1d(unsigned long long seed) {
  Outcome o;
  const auto qs = seeded_qs(seed, 20);
  require_report(o, "R Delta = Delta^per R for 20 seeded q (tol 1e-12)", check_intertwining_1d(qs, 1e-12));
  require_report(o, "closed form equals factorized form (tol 1e-12)", check_r_forms(qs, 1e-12));
  return o;
}

Outcome rmatrix_2d(unsigned long long seed) {
  Outcome o;
  const auto qs = seeded_qs(seed, 20);
  require_report(o, "plaquette R-matrix intertwines boxplus(S+-) for 20 seeded q", check_intertwining_2d(qs));
  for (const char* g : {"S+", "S-"})
    require_report(o, std::string("six-step conjugation chain for ") + g, check_chain(g, qs));
  return o;
}

Outcome semiclassical() {
  Outcome o;
  for (const auto& f : {semiclassical_fit_1d(kSemiclassicalH), semiclassical_fit_2d(kSemiclassicalH)})
    o.require(f.slope >= 0.9 && f.slope <= 1.1, f.name + " log-log slope " + std::to_string(f.slope) + " in [0.9, 1.1]");
  require_report(o, "classical r-matrix identities (tol 1e-12)", check_classical_identities(1e-12));
  return o;
}

Outcome peps() {
  Outcome o;
  const auto ex = make_pivot();
  const std::vector<Shape> suite = {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {2, 3}, {3, 2}, {3, 3}};
  require_report(o, "D=4 tensor reproduces boxplus(v) on the suite (tol 1e-12)",
                 check_peps_vs_boxplus(d4_instance(), ex, "v", suite, 1e-12));
  auto scan = mutation_scan(d4_instance(), ex, "v", suite, 1e-12);
  std::ostringstream late;
  bool early = true;
  for (const auto& m : scan) {
    bool ok = m.first_detected && m.first_detected->rows == 1 && m.first_detected->cols <= 2;
    if (!ok)
      late << " " << m.component << "@" << (m.first_detected ? to_string(*m.first_detected) : std::string("never"));
    early = early && ok;
  }
  o.require(early, "every single-component deletion detected at a size <= 1x2" +
                       (early ? std::string() : "; later:" + late.str()));
  // Reported for reference; the criterion is about the listed tensor.
  auto amended = check_peps_vs_boxplus(d4_amended_instance(), ex, "v", suite, 1e-12);
  o.details.push_back(std::string("info: amended D=4 tensor on the suite: ") + (amended.passed() ? "passes" : "fails"));

  auto r = solve_boundary(d2_instance(), ex, "v");
  bool certified = false;
  for (const auto& g : r.general)
    if (!g.feasible && g.certificate_orthogonality < 1e-10 && g.certificate_pairing > 1e-10) certified = true;
  const bool solver_ok = r.feasible ? (r.completion_check && r.completion_check->passed()) : certified;
  o.require(solver_ok, "D=2 boundary solver: " + std::string(r.feasible ? "completion passes the suite"
                                                                         : "certified infeasibility report"));
  return o;
}

Outcome negative_controls() {
  Outcome o;
  auto uq = check_trivial_proposition(uq_site_delta, uq_site_delta, {"S+", "S-", "K+"});
  o.require(!uq.premise_holds, "premise fails for the U_q coproduct at q = 2");
  auto g = check_trivial_proposition([](const std::string& s) { return std::vector<SweedlerTerm>{{1.0, s, s}}; },
                                     [](const std::string& s) { return std::vector<SweedlerTerm>{{1.0, s, s}}; },
                                     {"1", "g", "g2"});
  o.require(g.premise_holds && g.conclusion_holds, "premise and conclusion hold for group-like");
  auto lie = [](const std::string& s) {
    return s == "1" ? std::vector<SweedlerTerm>{{1.0, "1", "1"}}
                    : std::vector<SweedlerTerm>{{1.0, "1", s}, {1.0, s, "1"}};
  };
  auto l = check_trivial_proposition(lie, lie, {"1", "a", "b"});
  o.require(l.premise_holds && l.conclusion_holds, "premise and conclusion hold for Lie-like");
  CheckReport cube;
  for (const char* s : {"a", "b", "v"}) cube.merge(cube_xyz_compat(s));
  require_report(o, "3D pivot xyz-compatibility on the 2x2x2 cube", cube);
  return o;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream is(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    files[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return files;
}

std::string quoted(const std::string& s) { return "'" + s + "'"; }

Outcome determinism(const std::string& cli, unsigned long long seed) {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "lat2d_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::vector<std::string>> commands = {
      {"verify", "--example", "uq", "--q", "2", "--random-q", "5", "--sizes", "2x2,2x3", "--checks",
       "ks,commutator,kernel,singlets,rmatrix2d,chain"},
      {"verify", "--example", "pivot", "--sizes", "2x2,3x3", "--checks", "assoc,xycompat,counit"},
      {"build-op", "--gen", "S+,K+", "--q", "1.3", "--size", "2x3", "--rmatrix2d"},
      {"peps", "--rep", "d2", "--solve-boundary"},
  };
  for (std::size_t k = 0; k < commands.size(); ++k) {
    std::array<std::map<std::string, std::string>, 2> trees;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = root / ("cmd" + std::to_string(k)) / ("run" + std::to_string(rep));
      auto args = commands[k];
      args.insert(args.end(), {"--seed", std::to_string(seed), "--out", out.string()});
      int code;
      if (!cli.empty()) {
        std::string line = quoted(cli);
        for (const auto& a : args) line += " " + quoted(a);
        line += " > /dev/null 2>&1";
        code = std::system(line.c_str());
        code = WIFEXITED(code) ? WEXITSTATUS(code) : -1;
      } else {
        std::ostringstream sink;
        code = run_cli(args, sink, sink);
      }
      if (code != kExitPass) o.require(false, commands[k][0] + " run exited with " + std::to_string(code));
      if (fs::exists(out)) trees[rep] = read_tree(out);
    }
    o.require(!trees[0].empty() && trees[0] == trees[1],
              commands[k][0] + " " + commands[k][1] + " ...: " + std::to_string(trees[0].size()) +
                  " output files byte-identical across two runs");
  }
  fs::remove_all(root);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string cli;
  std::vector<int> expect_fail;
  unsigned long long seed = 42;
  bool verbose = false;
  app.add_option("--cli", cli, "path of the lat2d executable (default: run the commands in-process)");
  app.add_option("--expect-fail", expect_fail, "criteria known to fail (comma list)")->delimiter(',');
  app.add_option("--seed", seed, "seed for the randomized q sets");
  app.add_flag("-v,--verbose", verbose, "print every sub-check");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"axiom suite", axiom_suite},
      {"pivot structure", pivot_structure},
      {"bialgebra homomorphism", [&] { return bialgebra(seed); }},
      {"q-singlets", singlets},
      {"R-matrix 1D", [&] { return rmatrix_1d(seed); }},
      {"R-matrix 2D", [&] { return rmatrix_2d(seed); }},
      {"semiclassical limit", semiclassical},
      {"PEPS", peps},
      {"negative controls", negative_controls},
      {"determinism", [&] { return determinism(cli, seed); }},
  };

  std::set<int> failed;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("uncaught error: ") + e.what());
    }
    const double t = seconds_since(t0);
    if (!o.pass) failed.insert(id);
    std::cout << "criterion " << std::setw(2) << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[k].first
              << "  (" << std::fixed << std::setprecision(2) << t << " s)\n";
    for (const auto& d : o.details)
      if (verbose || !o.pass || d.rfind("info:", 0) == 0) std::cout << "    " << d << "\n";
  }

  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  auto list = [](const std::set<int>& s) {
    std::string out;
    for (int v : s) out += (out.empty() ? "" : ",") + std::to_string(v);
    return out.empty() ? std::string("none") : out;
  };
  std::cout << "failing criteria: " << list(failed) << "; expected: " << list(expected) << "\n";
  return failed == expected ? 0 : 1;
}
