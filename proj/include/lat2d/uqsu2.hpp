#pragma once

// U_q[su(2)] lattice operators in the spin-1/2 representation: relation
// checks, the telescoping commutator, q-singlets and the invariant subspace
// of the 2x2 plaquette.
//
// Basis convention: |0> is spin up (Sz = +1/2), |1> is spin down.
// Plaquette labels: the 2x2 lattice is drawn (1 2 / 3 4), i.e. labels 1, 2
// are the top row.  Linear sites count from the bottom row, so label k sits
// on linear site kLabelToLinear[k].

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "lat2d/coalg.hpp"

namespace lat2d {

// Rejects q = 0.
void require_nonzero(cplx q);
// Rejects |q^2 - 1| <= 1e-12, where 1/(q - 1/q) is needed.
void require_nonsingular(cplx q);

struct SpinHalfRep {
  cplx q;
  Eigen::Matrix2cd sp, sm, sz, kp, km, kp2, km2, id;

  // The same matrices keyed by the symbolic alphabet S+, S-, Sz, K+, K-, K+2, K-2, 1.
  Representation as_representation() const;
};

// K+- = diag(q^{+-1/2}, q^{-+1/2}) with the principal square root.
SpinHalfRep spin_half_rep(cplx q);

inline constexpr long kBoxplusDimCap = 4096;

// boxplus^{n,m}(gen) on the lattice, built symbolically and evaluated.  The
// result is cross-checked against direct_boxplus_op; a mismatch raises
// NumericalError.  gen is any symbol of the U_q alphabet.
SparseOperator boxplus_op(const std::string& gen, cplx q, int n, int m, long dim_cap = kBoxplusDimCap);
// Direct placement: gen at one site, K- on the earlier and K+ on the later
// sites in linear order (S+-); tensor powers for K's; sums of single-site Sz.
SparseOperator direct_boxplus_op(const std::string& gen, cplx q, int n, int m, long dim_cap = kBoxplusDimCap);

// K^alpha S^+- = q^{+-alpha} S^+- K^alpha for both alpha and both signs, on
// the n x m lattice operators.
CheckReport check_ks_relation(cplx q, int n, int m, double tol = kDefaultTol);
// [boxplus(S+), boxplus(S-)] = (boxplus(K+2) - boxplus(K-2)) / (q - 1/q).
CheckReport check_commutator(cplx q, int n, int m, double tol = kDefaultTol);

using StateVector = Eigen::VectorXcd;

// Plaquette label (1..4) -> linear site (1..4); entry 0 is unused.
inline constexpr std::array<int, 5> kLabelToLinear = {0, 3, 4, 1, 2};

// (q^{1/2}|01> - q^{-1/2}|10>) / sqrt(q - 1/q) on two sites, first site first.
StateVector q_singlet(cplx q);
// The two-site singlet identities: Delta(K+-)|s> = |s>, Delta(S+-)|s> = 0 and
// (K- (x) K+)|s>^q = sqrt(1/q - q)/sqrt(q - 1/q) |s>^{1/q}.
CheckReport check_singlet_identities(cplx q, double tol = kDefaultTol);

// Product of singlets over pairs of linear sites (1-based), one singlet per
// pair with its first site playing the role of the first tensor factor.
// Every site must be covered exactly once.
StateVector singlet_product(cplx q, const std::vector<std::pair<int, int>>& linear_pairs, int total_sites);
// The same with pairs given in plaquette labels on the 2x2 lattice.
StateVector plaquette_singlets(cplx q, const std::vector<std::pair<int, int>>& label_pairs);

// Dimension of the joint null space of boxplus^{2,2}(S+) and boxplus^{2,2}(S-)
// (SVD of the stacked 32x16 matrix, threshold 1e-10 relative to the largest
// singular value).  Valid for every nonzero q, including q = 1.
int joint_kernel_dim(cplx q);

struct KernelReport {
  cplx q;
  int dim = 0;
  std::vector<double> singular_values;  // descending
  Eigen::MatrixXcd basis;               // 16 x dim, orthonormal
  // max |boxplus(S+-) psi| for the printed states and their reversed orientation.
  double horizontal_residual = 0.0;          // |s>_{1,2} |s>_{3,4}
  double crossed_residual = 0.0;             // |s>_{3,2} |s>_{4,1}
  double horizontal_reversed_residual = 0.0; // |s>_{2,1} |s>_{4,3}
  double crossed_reversed_residual = 0.0;    // |s>_{2,3} |s>_{1,4}
  // alpha, beta in {(1,0), (0,1), (1,1)}: annihilation residual and distance
  // from the computed kernel.
  std::vector<double> family_residuals;
  std::vector<double> family_kernel_distance;
  // Vertical singlets |s>_{3,1} |s>_{4,2}: boxplus(S+-) maps them onto the
  // four states (|01>+|10>)_{1,3}|..>_{2,4} and |..>_{1,3}(|01>+|10>)_{2,4}
  // with equal weight; the measured weight divided by 1/sqrt(q - 1/q) is
  // compared with (q^{1/2} - q^{-1/2}) / sqrt(q - 1/q).
  cplx vertical_coefficient = 0.0;  // measured, from S+ (S- must agree)
  cplx vertical_expected = 0.0;
  // The images of S+ and S- lie exactly on the four states with one common
  // modulus, and both generators give the same coefficient.
  bool vertical_support_ok = false;
  int vertical_relative_sign = 0;  // sign of the (2,4) part relative to the (1,3) part
  double vertical_printed_orientation_residual = 0.0;  // |s>_{1,3}|s>_{2,4}: max |boxplus(S+) psi|
};

KernelReport kernel_2x2(cplx q);
nlohmann::json to_json(const KernelReport& r);

// Counit and antipode identities for the listed families on boundaries of
// length n, in both directions, evaluated in the spin-1/2 representation.
CheckReport check_counit_antipode_families(cplx q, int n, double tol = kDefaultTol);

}  // namespace lat2d
