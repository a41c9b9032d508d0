#pragma once

// Boundary-decorated PEPS on small open lattices, contracted exactly over a
// symbolic physical space, and the two tensor representations of the pivot
// coalgebra (bond dimension 4 with a product boundary, bond dimension 2 with
// a partially given boundary that is completed by a solver).
//
// Tensor components are written (top / left PHYS right / bottom).  Internal
// bonds join the top leg of a site to the bottom leg of the site above and
// the right leg to the left leg of the right neighbour.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lat2d/coalg.hpp"

namespace lat2d {

struct PepsComponent {
  std::string phys;
  int l = 0, t = 0, r = 0, b = 0;
  cplx coeff = 1.0;

  auto operator<=>(const PepsComponent&) const = default;
};

struct PepsTensor {
  std::vector<std::string> alphabet;
  int D = 1;
  std::vector<PepsComponent> components;

  // Bond indices < D, symbols in the alphabet; raises ConfigError.
  void validate() const;
};

enum class Side { Left = 0, Top = 1, Right = 2, Bottom = 3 };
std::string to_string(Side s);

// Per side, one chi x chi matrix per bond value (an all-zero matrix where the
// bond value is not allowed), plus one closing matrix per physical symbol.
// chi = 1 is the product ("trivial") boundary: each side is a dual vector on
// the bond space and b is a scalar.
struct BoundarySpec {
  int chi = 1;
  std::array<std::vector<Eigen::MatrixXcd>, 4> sides;  // indexed by Side
  std::map<std::string, Eigen::MatrixXcd> b;
  // Sides or closing matrices still to be determined by solve_boundary.
  bool complete = true;

  const Eigen::MatrixXcd& at(Side s, int bond) const;
  // Every side with D entries of size chi x chi, b matrices chi x chi.
  void validate(int D) const;
};

// Dual vector sum_k <k| on the listed bond values, as a chi = 1 side.
std::vector<Eigen::MatrixXcd> selector(int D, const std::vector<int>& bonds);

struct PepsInstance {
  PepsTensor tensor;
  BoundarySpec boundary;
};

inline constexpr int kPepsMaxSites = 9;
inline constexpr double kPepsMaxBondStates = 1e4;

// Exact contraction for the closing symbol sym.  The boundary matrices are
// multiplied around the perimeter as
//   Tr[A_l(bottom..top) A_t(left..right) A_r(top..bottom) A_b(right..left) b],
// started `rotation` legs further along that cycle (the result does not
// depend on it).  Raises ResourceError beyond n*m <= 9 or D^max(n,m) <= 1e4,
// ConfigError for an incomplete boundary or a symbol without b.
FormalSum contract(const PepsInstance& inst, int n, int m, const std::string& sym = "v", int rotation = 0);

// The nine components of the D = 4 tensor with A_t = A_r = <2| + <3|,
// A_b = A_l = <0| + <1| and b_v = 1.
PepsInstance d4_instance();
// The D = 4 tensor with component 6 written (0 / 2 a 2 / 0) instead of
// (0 / 0 a 0 / 0).  The listed tensor also contracts to grids with two v's
// from 2x2 on, e.g. (v b / a v); this single change removes them.
PepsInstance d4_amended_instance();
inline constexpr int kD4AmendedComponent = 6;
// The five components of the D = 2 tensor with A_t = <1|, A_b = <0| (as
// selectors times the chi = 2 identity); A_l, A_r and b_v are free.
PepsInstance d2_instance();

// The instance with component k removed.
PepsInstance drop_component(const PepsInstance& inst, int k);

// sums_equal(contract(inst, n, m), boxplus(ex, sym, n, m)) per size.
CheckReport check_peps_vs_boxplus(const PepsInstance& inst, const CoalgebraExample& ex, const std::string& sym,
                                  const std::vector<Shape>& sizes, double tol = kDefaultTol);

struct MutationResult {
  int component = 0;
  std::optional<Shape> first_detected;  // first failing size in the given order
};
std::vector<MutationResult> mutation_scan(const PepsInstance& inst, const CoalgebraExample& ex, const std::string& sym,
                                          const std::vector<Shape>& sizes, double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// Boundary completion for partially specified instances.
//
// General analysis: with the top and bottom sides fixed, the coefficient of
// every grid is linear in the boundary weight W(beta) of the left/right bond
// configuration beta, c_G = sum_beta M[G][beta] W(beta).  Any boundary, of
// any chi, gives some W, so if M W = t has no solution for one size no
// boundary at all reproduces the target; y = t - M W_ls is then a
// certificate: M^H y = 0 and <y, t> = |y|^2 > 0.
//
// W-state ansatz (chi = 2): A_s^i = g_s(i) 1 + x_s(i) sigma+ on the left and
// right sides, b = sigma-.  The trace keeps exactly one sigma+, so the
// contraction is linear in x for each 0/1 pattern g.

struct SizeAnalysis {
  Shape size;
  int grids = 0;    // rows of M (reachable or targeted grids)
  int configs = 0;  // columns of M (boundary configurations)
  int rank = 0;
  double residual = 0.0;  // max |t - M W_ls|
  bool feasible = false;
  int solution_dim = 0;   // configs - rank when feasible
  // Certificate entries (grid, y) with |y| > 1e-12, and max |M^H y|.
  std::vector<std::pair<std::string, cplx>> certificate;
  double certificate_orthogonality = 0.0;
  double certificate_pairing = 0.0;  // Re <y, t>
};

struct AnsatzTrial {
  std::array<int, 4> g{};          // g_l(0), g_l(1), g_r(0), g_r(1)
  std::array<cplx, 4> x{};         // x_l(0), x_l(1), x_r(0), x_r(1)
  double residual = 0.0;
  int rank = 0;
};

struct BoundarySolveReport {
  std::vector<Shape> sizes;
  std::vector<SizeAnalysis> general;
  std::vector<AnsatzTrial> ansatz;
  bool feasible = false;
  std::optional<BoundarySpec> completion;
  std::optional<CheckReport> completion_check;
  std::string conclusion;
};

// Targets per size; each target must have the size's shape.
BoundarySolveReport solve_boundary(const PepsInstance& inst, const std::map<Shape, FormalSum>& targets,
                                   double tol = kDefaultTol);
// Targets boxplus(ex, sym, n, m) for the given sizes (default: all n, m <= 3).
BoundarySolveReport solve_boundary(const PepsInstance& inst, const CoalgebraExample& ex, const std::string& sym,
                                   std::vector<Shape> sizes = {}, double tol = kDefaultTol);

std::vector<Shape> sizes_up_to(int n_max, int m_max);

// ---------------------------------------------------------------------------
// JSON.  Components are arrays [phys, l, t, r, b, re, im]; matrices are row
// lists of [re, im] pairs.

nlohmann::json to_json(const PepsTensor& t);
PepsTensor peps_tensor_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BoundarySpec& b);
BoundarySpec boundary_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BoundarySolveReport& r);

}  // namespace lat2d
