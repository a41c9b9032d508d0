#pragma once

// Concrete 2D coalgebras: group-like, Lie-like, the two one-directional
// constructions, cross-like, pivot (with rotated variants), Taft and the
// symbolic U_q[su(2)] example.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lat2d/coalg.hpp"

namespace lat2d {

// ---------------------------------------------------------------------------
// Group-like and Lie-like

// Multiplication table of a finite group: product[{g, h}] = gh.
struct GroupTable {
  std::string identity;
  std::map<std::pair<std::string, std::string>, std::string> product;

  std::string inverse(const std::string& g) const;
};

// Cyclic group of the given order with elements "1", "g", "g2", ...
GroupTable cyclic_group_table(int order);
std::vector<std::string> group_elements(const GroupTable& t);

// Every symbol is group-like in both directions.  With a table, the example
// also gets an antipode (symbol inverse), relations from the table and the
// regular permutation representation.
CoalgebraExample make_group_like(std::vector<std::string> alphabet, std::optional<GroupTable> table = std::nullopt);

// Sitewise primitive coproduct 1 (x) a + a (x) 1 for every non-unit symbol.
// The representation sends a -> sigma^+, b -> sigma^-, unit -> identity.
CoalgebraExample make_lie_like(std::vector<std::string> alphabet = {"1", "a", "b"}, std::string unit = "1");

// ---------------------------------------------------------------------------
// One-directional constructions built from an inner one-site coproduct.

struct InnerCoproduct {
  std::vector<std::string> alphabet;
  std::map<std::string, std::vector<SweedlerTerm>> delta;
  std::map<std::string, cplx> counit;
  std::optional<std::string> unit;

  const std::vector<SweedlerTerm>& of(const std::string& s) const;
};

// Delta(v) = a (x) v + v (x) b with a, b group-like (and a unit 1).
InnerCoproduct pivot_inner_coproduct();

// y is group-like on every row; x acts on constant columns through the inner
// coproduct: (u, ..., u)^T -> sum_i (u1_i, ...)^T (x) (u2_i, ...)^T.
CoalgebraExample make_quasi1d_group(const InnerCoproduct& inner);
// x is the sitewise inner coproduct; y is the non-factorized primitive map
// w -> w (x) 1_m + 1_m (x) w on rows.  Requires Delta(1) = 1 (x) 1.
CoalgebraExample make_quasi1d_lie(const InnerCoproduct& inner);

// ---------------------------------------------------------------------------
// Cross-like example over {1, t, b, r, l, v}.

CoalgebraExample make_cross();
// Closed form of boxplus(v): a cross of l/r (same row) and b/t (same column,
// below/above) around v, 1 elsewhere.
FormalSum cross_pattern_sum(Shape s);

// ---------------------------------------------------------------------------
// Pivot family.

struct PivotConfig {
  std::string a = "a", b = "b", v = "v";
  double theta_over_pi = 0.0;  // rotation angle in units of pi; multiple of 1/8
};

void validate(const PivotConfig& cfg);
// theta = 0 uses the direct rules (sitewise coproduct on columns, row
// patterns a^k v b^{m-k-1}); other angles derive splitters from the rotated
// site order.
CoalgebraExample make_pivot(const PivotConfig& cfg = {});
// Always uses the derived splitters, also at theta = 0.
CoalgebraExample make_pivot_derived(const PivotConfig& cfg = {});
// The rotated pattern with v at row i (from the bottom) and column j.
GridWord pivot_pattern(const PivotConfig& cfg, Shape s, int i, int j);
// Closed form of boxplus(v): the sum of pivot_pattern over all sites.
FormalSum pivot_pattern_sum(const PivotConfig& cfg, Shape s);
// Lattice sites sorted along the rotated order (1-based linear indices).
std::vector<int> pivot_site_order(const PivotConfig& cfg, Shape s);
// The 4x4 grid printed for theta = pi/4, stored verbatim (top row first:
// b b b a / b v a a / a a a a / a a a a).
GridWord rotated_quarter_reference_grid();

// ---------------------------------------------------------------------------
// Taft algebra: g^n = 1, x^n = 0, x g = omega g x; Delta(g) = g (x) g,
// Delta(x) = 1 (x) x + x (x) g.

struct TaftConfig {
  int n = 2;
  cplx omega = -1.0;
};

void validate(const TaftConfig& cfg);
TaftConfig taft_config(int n);  // omega = exp(2 pi i / n)
// Name of the basis element g^i x^j: "1", "g", "g2", "x", "gx", "g2x2", ...
std::string taft_name(int i, int j);
std::pair<int, int> taft_exponents(const TaftConfig& cfg, const std::string& name);
// Structure constants (g^i x^j)(g^k x^l) = omega^{jk} g^{i+k} x^{j+l}.
FormalSum taft_multiply(const TaftConfig& cfg, const std::string& s1, const std::string& s2);
// Left-regular representation on the n^2-dimensional algebra.
Representation taft_regular_rep(const TaftConfig& cfg);
CoalgebraExample make_taft(const TaftConfig& cfg);

// ---------------------------------------------------------------------------
// Symbolic U_q[su(2)].

// Alphabet {S+, S-, K+, K-, K+2, K-2, Sz, 1}; x is the sitewise coproduct
// Delta(S) = S (x) K+ + K- (x) S, Delta(Sz) = Sz (x) 1 + 1 (x) Sz; y uses the
// pivot row patterns for the triples (K-, S+-, K+) and (1, Sz, 1).
CoalgebraExample make_uq_symbolic(cplx q);

// ---------------------------------------------------------------------------
// Selection by configuration.

// {"example":"pivot","theta_over_pi":0.25}, {"example":"taft","n":2},
// {"example":"uq","q_re":1.3,"q_im":0.0}, {"example":"group-like"}, ...
CoalgebraExample make_example(const nlohmann::json& cfg);
std::vector<std::string> example_names();

}  // namespace lat2d
