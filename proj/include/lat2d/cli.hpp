#pragma once

// Command-line front door: run check suites, export lattice operators and
// run the PEPS checks.  Every command writes JSON reports (sorted keys, no
// timing data) into the output directory and returns a stable exit code:
// 0 all checks pass, 1 some check failed, 2 invalid configuration.

#include <iosfwd>
#include <string>
#include <vector>

#include "lat2d/symcore.hpp"

namespace lat2d {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

struct RunConfig {
  std::string command;  // verify | build-op | peps
  std::string example = "pivot";
  double theta_over_pi = 0.0;
  int taft_n = 2;
  std::vector<cplx> q;       // explicit values
  int random_q = 0;          // additional seeded values
  std::vector<Shape> sizes;  // empty: the command's default
  std::vector<std::string> checks;
  std::string out = "lat2d_out";
  double tol = kDefaultTol;
  unsigned long long seed = 42;
  // build-op
  std::vector<std::string> gen;
  bool rmatrix = false;
  bool rmatrix2d = false;
  // peps
  std::string rep = "d4";
  bool solve_boundary = false;
  std::string mutate;  // "", "drop:k" or "scan"
};

// Keys are the long flag names with '-' replaced by '_'; q entries may be
// numbers, [re, im] pairs or strings accepted by parse_q.  Unknown keys raise
// ConfigError.  Fields absent from j keep the values of base.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json to_json(const RunConfig& c);

// "2", "-0.5", "1.3+0.2i", "0.8-1i", "2i"; raises ConfigError.
cplx parse_q(const std::string& text);
std::string format_q(cplx q);

// The explicit q values followed by seeded_qs(seed, random_q).
std::vector<cplx> q_values(const RunConfig& c);

// Check names accepted by verify, in report order.
const std::vector<std::string>& verify_check_names();

// Raises ConfigError / ParameterError for anything the command cannot run.
void validate(const RunConfig& c);

int cmd_verify(const RunConfig& c, std::ostream& log);
int cmd_build_op(const RunConfig& c, std::ostream& log);
int cmd_peps(const RunConfig& c, std::ostream& log);

// Parses args (without the program name), merges --config and dispatches.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lat2d
