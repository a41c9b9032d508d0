#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lat2d/uqsu2.hpp"

using namespace lat2d;

namespace {

const cplx kUnitQ = std::polar(1.0, std::numbers::pi / 5);

std::vector<cplx> sample_qs(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> real(0.5, 2.0), phase(0.1, std::numbers::pi - 0.1);
  std::vector<cplx> out;
  for (int k = 0; k < count; ++k) out.push_back(k % 2 == 0 ? cplx(real(rng)) : std::polar(1.0, phase(rng)));
  return out;
}

Eigen::MatrixXcd kron2(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return kron_sites({a, b}).dense(); }

}  // namespace

TEST(SpinHalf, Matrices) {
  auto r1 = spin_half_rep(1.0);
  EXPECT_LT(max_abs(Eigen::MatrixXcd(r1.kp - r1.id)), 1e-15);
  EXPECT_LT(max_abs(Eigen::MatrixXcd(r1.km - r1.id)), 1e-15);
  auto r4 = spin_half_rep(4.0);
  EXPECT_NEAR(std::abs(r4.kp(0, 0) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r4.kp(1, 1) - 0.5), 0.0, 1e-15);
  auto r2 = spin_half_rep(2.0);
  Eigen::Matrix2cd comm = r2.sp * r2.sm - r2.sm * r2.sp;
  Eigen::Matrix2cd rhs = (r2.kp2 - r2.km2) / (2.0 - 0.5);
  EXPECT_LT(max_abs(Eigen::MatrixXcd(comm - rhs)), 1e-12);
  EXPECT_LT(max_abs(Eigen::MatrixXcd(comm - Eigen::Matrix2cd(Eigen::Vector2cd(1.0, -1.0).asDiagonal()))), 1e-12);
  EXPECT_LT(max_abs(Eigen::MatrixXcd(r2.kp * r2.sp - 2.0 * r2.sp * r2.kp)), 1e-12);
  EXPECT_LT(max_abs(Eigen::MatrixXcd(r2.kp * r2.km - r2.id)), 1e-12);
  EXPECT_THROW(spin_half_rep(0.0), ParameterError);
}

TEST(BoxplusOp, UndeformedLimitIsTotalSpin) {
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m) {
      if (n * m > 9) continue;
      auto op = boxplus_op("S+", 1.0, n, m);
      SparseOperator want = SparseOperator::zero(op.dim());
      auto r = spin_half_rep(1.0);
      for (int s = 0; s < n * m; ++s) {
        std::vector<Eigen::MatrixXcd> f(static_cast<std::size_t>(n * m), Eigen::MatrixXcd(r.id));
        f[static_cast<std::size_t>(s)] = r.sp;
        want = want + kron_sites(f);
      }
      EXPECT_LT(max_abs_diff(op, want), 1e-12) << n << "x" << m;
    }
}

TEST(BoxplusOp, KIsDiagonalTensorPower) {
  auto op = boxplus_op("K+", 2.0, 2, 2).dense();
  for (int i = 0; i < 16; ++i) {
    int ones = __builtin_popcount(static_cast<unsigned>(i));
    EXPECT_NEAR(std::abs(op(i, i) - std::pow(2.0, (4 - 2 * ones) / 2.0)), 0.0, 1e-12);
  }
  EXPECT_LT(max_abs(Eigen::MatrixXcd(op - Eigen::MatrixXcd(op.diagonal().asDiagonal()))), 1e-15);
}

TEST(BoxplusOp, TwoByTwoFromDiagramGrids) {
  const cplx q = 2.0;
  auto r = spin_half_rep(q);
  // Linear sites 1..4 = bottom-left, bottom-right, top-left, top-right.
  Eigen::MatrixXcd want = kron_sites({r.sp, r.kp, r.kp, r.kp}).dense() + kron_sites({r.km, r.sp, r.kp, r.kp}).dense() +
                          kron_sites({r.km, r.km, r.sp, r.kp}).dense() + kron_sites({r.km, r.km, r.km, r.sp}).dense();
  EXPECT_LT(max_abs(Eigen::MatrixXcd(boxplus_op("S+", q, 2, 2).dense() - want)), 1e-12);
}

TEST(BoxplusOp, EngineMatchesDirectPlacement) {
  for (cplx q : sample_qs(4, 17))
    for (auto [n, m] : {std::pair{1, 3}, std::pair{2, 2}, std::pair{3, 2}, std::pair{3, 3}})
      for (const char* g : {"S+", "S-", "K+", "K-", "Sz"})
        EXPECT_LT(max_abs_diff(boxplus_op(g, q, n, m), direct_boxplus_op(g, q, n, m)), 1e-10);
}

TEST(BoxplusOp, DimensionCap) {
  EXPECT_THROW(boxplus_op("S+", 2.0, 4, 4), ResourceError);
  EXPECT_THROW(boxplus_op("S+", 2.0, 2, 2, 8), ResourceError);
  EXPECT_THROW(boxplus_op("X", 2.0, 1, 1), RepresentationError);
}

TEST(Relations, KsAndCommutator) {
  for (auto [q, n, m] : {std::tuple{cplx(2.0), 2, 2}, std::tuple{cplx(1.1), 3, 2}, std::tuple{kUnitQ, 2, 2}}) {
    EXPECT_TRUE(check_ks_relation(q, n, m).passed());
    EXPECT_TRUE(check_commutator(q, n, m).passed());
  }
  EXPECT_THROW(check_commutator(1.0, 2, 2), ParameterError);
  EXPECT_THROW(check_commutator(-1.0, 2, 2), ParameterError);
}

TEST(Relations, TelescopingResidualDoesNotGrowWithQ) {
  for (double q : {1.5, 3.0, 8.0}) {
    auto r = check_commutator(q, 2, 2);
    // Entries of the commutator grow like q^2 at 2x2; the residual is round-off.
    EXPECT_LT(r.max_residual().value(), 1e-13 * std::pow(q, 4));
  }
}

TEST(Singlet, InvariantUnderCoproduct) {
  const cplx q = 3.0;
  auto r = spin_half_rep(q);
  auto s = q_singlet(q);
  Eigen::MatrixXcd dsp = kron2(r.sp, r.kp) + kron2(r.km, r.sp), dsm = kron2(r.sm, r.kp) + kron2(r.km, r.sm);
  EXPECT_LT((dsp * s).norm(), 1e-12);
  EXPECT_LT((dsm * s).norm(), 1e-12);
  EXPECT_LT((kron2(r.kp, r.kp) * s - s).norm(), 1e-12);
  EXPECT_LT((kron2(r.km, r.km) * s - s).norm(), 1e-12);
}

TEST(Singlet, KMinusKPlusMapsToInverseQ) {
  const cplx q = 2.0;
  auto r = spin_half_rep(q);
  cplx ratio = std::sqrt(1.0 / q - q) / std::sqrt(q - 1.0 / q);
  EXPECT_LT((kron2(r.km, r.kp) * q_singlet(q) - ratio * q_singlet(1.0 / q)).norm(), 1e-10);
  EXPECT_THROW(q_singlet(1.0), ParameterError);
}

TEST(Singlet, IdentityReport) {
  for (cplx q : {cplx(2.0), cplx(3.0), kUnitQ}) {
    auto r = check_singlet_identities(q);
    EXPECT_EQ(r.instances.size(), 5u);
    EXPECT_TRUE(r.passed()) << to_json(r).dump(1);
  }
  EXPECT_THROW(check_singlet_identities(1.0), ParameterError);
}

TEST(Singlet, ProductPlacement) {
  auto psi = singlet_product(2.0, {{1, 2}}, 2);
  EXPECT_LT((psi - q_singlet(2.0)).norm(), 1e-15);
  EXPECT_THROW(singlet_product(2.0, {{1, 2}}, 4), ShapeError);
  EXPECT_THROW(plaquette_singlets(2.0, {{1, 5}, {2, 3}}), RangeError);
}

TEST(Kernel, PrintedStatesSpanTheKernel) {
  for (cplx q : {cplx(2.0), cplx(3.0), kUnitQ}) {
    auto k = kernel_2x2(q);
    EXPECT_EQ(k.dim, 2);
    EXPECT_LT(k.horizontal_residual, 1e-10);
    EXPECT_LT(k.crossed_residual, 1e-10);
    for (double d : k.family_residuals) EXPECT_LT(d, 1e-10);
    for (double d : k.family_kernel_distance) EXPECT_LT(d, 1e-10);
    // Reversing the orientation leaves the kernel.
    EXPECT_GT(k.horizontal_reversed_residual, 1e-3);
    EXPECT_GT(k.crossed_reversed_residual, 1e-3);
  }
}

TEST(Kernel, DimensionTwoForSampledQAndAtOne) {
  for (cplx q : sample_qs(10, 99)) EXPECT_EQ(joint_kernel_dim(q), 2) << q;
  EXPECT_EQ(joint_kernel_dim(1.0), 2);
}

TEST(Kernel, VerticalSingletCoefficient) {
  double prev = std::numeric_limits<double>::infinity();
  for (double q : {1.5, 1.1, 1.01}) {
    auto k = kernel_2x2(q);
    EXPECT_TRUE(k.vertical_support_ok);
    EXPECT_EQ(k.vertical_relative_sign, -1);
    EXPECT_LT(std::abs(k.vertical_coefficient - k.vertical_expected), 1e-10);
    EXPECT_LT(std::abs(k.vertical_coefficient), prev);
    prev = std::abs(k.vertical_coefficient);
  }
  auto k2 = kernel_2x2(2.0);
  EXPECT_NEAR(std::abs(k2.vertical_expected), (std::sqrt(2.0) - std::sqrt(0.5)) / std::sqrt(1.5), 1e-12);
}

TEST(Families, CounitAndAntipode) {
  for (int n = 1; n <= 3; ++n) {
    auto r = check_counit_antipode_families(2.0, n);
    EXPECT_TRUE(r.passed()) << to_json(r).dump(1);
  }
}

TEST(Json, KernelReport) {
  auto j = to_json(kernel_2x2(2.0));
  EXPECT_EQ(j["kernel_dim"], 2);
  EXPECT_EQ(j["kernel_basis"].size(), 2u);
  EXPECT_EQ(j["kernel_basis"][0].size(), 16u);
}
