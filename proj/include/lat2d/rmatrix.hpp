#pragma once

// The spin-1/2 R-matrix of U_q[su(2)], the permuted coproducts, the 2D
// R-matrix on the 2x2 plaquette as a product of 1D R-matrices, and the
// semiclassical (classical r-matrix) limit.
//
// Pair operators X_{ij} on the plaquette use labels (1 2 / 3 4) with the
// first tensor factor on label i; labels map to linear sites through
// kLabelToLinear.  All comparisons use the max-abs-entry norm.

#include <string>
#include <vector>

#include "lat2d/uqsu2.hpp"

namespace lat2d {

// [[q,0,0,0],[0,1,q-1/q,0],[0,0,1,0],[0,0,0,q]].
Eigen::Matrix4cd r_matrix(cplx q);
// q^{2 Sz (x) Sz} q^{1/2} (1 + (q - 1/q) S+ (x) S-).
Eigen::Matrix4cd r_matrix_factorized(cplx q);

// Delta(S) = S (x) K+ + K- (x) S and Delta^per(S) = S (x) K- + K+ (x) S for
// gen in {S+, S-}; group-like K's give K (x) K in both.
Eigen::Matrix4cd delta_op(const std::string& gen, cplx q);
Eigen::Matrix4cd delta_perm(const std::string& gen, cplx q);

// A two-site operator placed on plaquette labels (i, j), first factor on i.
Eigen::MatrixXcd embed_pair(const Eigen::Matrix4cd& op, int i, int j);
// A one-site operator on plaquette label i.
Eigen::MatrixXcd embed_site(const Eigen::Matrix2cd& op, int i);
// R_{ij} or its inverse on the plaquette.
Eigen::MatrixXcd r_pair(cplx q, int i, int j, bool inverse = false);

// R_{14}^{-1} R_{24}^{-1} R_{13}^{-1} R_{23}^{-1} R_{34} R_{12}.
Eigen::MatrixXcd r2d(cplx q);

// boxplus^{2,2}(gen) with every K+ and K- exchanged, as a formal sum and
// evaluated in the spin-1/2 representation.
FormalSum boxplus_perm_sum(const std::string& gen);
Eigen::MatrixXcd boxplus_perm(const std::string& gen, cplx q);

// Classical r-matrix r = 1/4 + Sz (x) Sz + S+ (x) S- and the 2D combination
// r12 + r34 - r14 - r13 - r23 - r24.
Eigen::Matrix4cd classical_r();
Eigen::MatrixXcd classical_r2d();
// A_{ij} = -S_i Sz_j + Sz_i S_j on the plaquette (gen in {S+, S-}).
Eigen::MatrixXcd a_pair(const std::string& gen, int i, int j);
// The right side of the first-order 2D intertwining relation written out
// site by site: S1(-Sz2+Sz3+Sz4) + S2(Sz1+Sz3+Sz4) - S3(Sz1+Sz2+Sz4) - S4(Sz1+Sz2-Sz3).
Eigen::MatrixXcd first_order_rhs(const std::string& gen);

// ---------------------------------------------------------------------------
// The conjugation chain carrying boxplus^{2,2} to its permuted version.

struct ChainStep {
  int i, j;
  bool inverse;  // false: R (.) R^{-1}; true: R^{-1} (.) R
  std::string name() const;
};

// R12, R34, R23^-1, R13^-1, R24^-1, R14^-1 in order of application.
const std::vector<ChainStep>& chain_steps();
// The seven grid sums X0 = boxplus, X1, ..., X6 = permuted boxplus as
// printed, for gen in {S+, S-}.
std::vector<FormalSum> printed_chain(const std::string& gen);
// Symbolic action of one conjugation: the pair (S_i K+_j, K-_i S_j) becomes
// (S_i K-_j, K+_i S_j) (reverse for the inverse step), equal K's on (i, j)
// are untouched.  Anything else raises DomainError.
FormalSum conjugate_symbolic(const FormalSum& s, const ChainStep& step);

// For each step: symbolic image of the previous sum equals the printed one,
// and R X_{k-1} R^{-1} equals X_k numerically for every q.
CheckReport check_chain(const std::string& gen, const std::vector<cplx>& qs, double tol = kDefaultTol);

// Deterministic sample of q values: |q| log-uniform in [1/2, 2] and arg q
// uniform in [-pi/4, pi/4], redrawn while |q^2 - 1| < 1e-3.
std::vector<cplx> seeded_qs(unsigned long long seed, int count);

// R Delta(S+-) = Delta^per(S+-) R on two sites.
CheckReport check_intertwining_1d(const std::vector<cplx>& qs, double tol = 1e-12);
// R2d boxplus^{2,2}(S+-) = boxplus_perm(S+-) R2d on the plaquette.
CheckReport check_intertwining_2d(const std::vector<cplx>& qs, double tol = kDefaultTol);
// Closed form vs factorized R; R2d(1) = 1 and invertibility.
CheckReport check_r_forms(const std::vector<cplx>& qs, double tol = 1e-12);
// [r_{ij}, S_i + S_j] = A_{ij} for every pair, and [r2d, sum S] against both
// the A-combination and the site-by-site form, for S+ and S-.
CheckReport check_classical_identities(double tol = 1e-12);

// ---------------------------------------------------------------------------
// Semiclassical limit q = e^h.

struct SemiclassicalFit {
  std::string name;
  std::vector<double> h, error;
  double slope = 0.0;
};

// E(h) = |(R(e^h) - 1)/(2h) - r| (1D) or the same for the plaquette pair
// (R2d, r2d) with the trace part removed from both sides; the slope is the
// least-squares fit of log E against log h.
SemiclassicalFit semiclassical_fit_1d(const std::vector<double>& hs);
SemiclassicalFit semiclassical_fit_2d(const std::vector<double>& hs);
nlohmann::json to_json(const SemiclassicalFit& f);

inline const std::vector<double> kSemiclassicalH = {0.2, 0.1, 0.05, 0.025, 0.0125};

// Both fits; an instance passes when its slope lies in [0.9, 1.1].
CheckReport check_semiclassical(const std::vector<double>& hs = kSemiclassicalH);

}  // namespace lat2d
