#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lat2d/examples.hpp"
#include "lat2d/rmatrix.hpp"

using namespace lat2d;

namespace {

const std::vector<cplx> kFewQ = {2.0, 0.7, std::polar(1.0, std::numbers::pi / 5), std::polar(1.3, 0.4)};

std::string failures(const CheckReport& r) {
  std::string out;
  for (const auto& i : r.instances)
    if (!i.pass) out += i.input + " [" + i.note + "]\n";
  return out;
}

}  // namespace

TEST(RMatrix, ClosedFormEntries) {
  Eigen::Matrix4cd r = r_matrix(2.0);
  EXPECT_EQ(r(0, 0), cplx(2.0));
  EXPECT_EQ(r(1, 2), cplx(1.5));
  EXPECT_EQ(r(2, 1), cplx(0.0));
  EXPECT_EQ(r(3, 3), cplx(2.0));
  EXPECT_LT(max_abs(Eigen::MatrixXcd(r_matrix(1.0) - Eigen::Matrix4cd::Identity())), 1e-15);
  EXPECT_THROW(r_matrix(0.0), ParameterError);
}

TEST(RMatrix, FormsAgreeAndR2dIsInvertible) {
  auto rep = check_r_forms(kFewQ);
  EXPECT_TRUE(rep.passed()) << failures(rep);
}

TEST(RMatrix, SeededQsAreDeterministicAndRegular) {
  auto a = seeded_qs(42, 20), b = seeded_qs(42, 20), c = seeded_qs(7, 20);
  ASSERT_EQ(a.size(), 20u);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (cplx q : a) {
    EXPECT_GE(std::abs(q), 0.5 - 1e-12);
    EXPECT_LE(std::abs(q), 2.0 + 1e-12);
    EXPECT_GE(std::abs(q * q - 1.0), 1e-3);
  }
}

TEST(RMatrix, Intertwining1d) {
  auto rep = check_intertwining_1d(seeded_qs(42, 20));
  EXPECT_TRUE(rep.passed()) << failures(rep);
  EXPECT_EQ(rep.instances.size(), 40u);
}

TEST(RMatrix, UnpermutedDeltaIsNotIntertwined) {
  // R Delta = Delta R fails for q != 1: the permutation is essential.
  const cplx q = 2.0;
  Eigen::Matrix4cd r = r_matrix(q);
  EXPECT_GT(max_abs(Eigen::MatrixXcd(r * delta_op("S+", q) - delta_op("S+", q) * r)), 0.1);
}

TEST(RMatrix, EmbedPairPlacesFirstFactorOnFirstLabel) {
  const auto s = spin_half_rep(1.0);
  Eigen::Matrix4cd sp_sm;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) sp_sm(r, c) = s.sp(r / 2, c / 2) * s.sm(r % 2, c % 2);
  for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}, {1, 4}, {4, 1}, {3, 2}}) {
    Eigen::MatrixXcd expected = embed_site(s.sp, i) * embed_site(s.sm, j);
    EXPECT_LT(max_abs(Eigen::MatrixXcd(embed_pair(sp_sm, i, j) - expected)), 1e-15) << i << j;
  }
  EXPECT_THROW(embed_pair(sp_sm, 2, 2), RangeError);
  EXPECT_THROW(embed_pair(sp_sm, 0, 2), RangeError);
}

TEST(RMatrix, PermutedBoxplusSwapsKs) {
  auto perm = boxplus_perm_sum("S+");
  EXPECT_EQ(perm.size(), 4u);
  // Label 1 is linear site 3: S+ there has K+ before (sites 1, 2) and K- after.
  EXPECT_NEAR(std::abs(perm.coeff({"K+", "K+", "S+", "K-"}) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(perm.coeff({"S+", "K-", "K-", "K-"}) - 1.0), 0.0, 1e-15);
  EXPECT_THROW(boxplus_perm_sum("Sz"), RepresentationError);
}

TEST(RMatrix, Intertwining2d) {
  auto rep = check_intertwining_2d(seeded_qs(42, 20));
  EXPECT_TRUE(rep.passed()) << failures(rep);
  EXPECT_EQ(rep.instances.size(), 40u);
}

TEST(RMatrix, ReversedFactorOrderAlsoIntertwines) {
  // The six pairwise conjugations can be applied in the opposite order too.
  const cplx q = 1.7;
  Eigen::MatrixXcd reversed = r_pair(q, 1, 2) * r_pair(q, 3, 4) * r_pair(q, 2, 3, true) * r_pair(q, 1, 3, true) *
                              r_pair(q, 2, 4, true) * r_pair(q, 1, 4, true);
  Eigen::MatrixXcd lhs = reversed * boxplus_op("S+", q, 2, 2).dense();
  EXPECT_LT(max_abs(Eigen::MatrixXcd(lhs - boxplus_perm("S+", q) * reversed)), 1e-12);
}

TEST(RMatrix, WrongInverseBreaksIntertwining2d) {
  const cplx q = 1.7;
  Eigen::MatrixXcd wrong = r_pair(q, 1, 4, true) * r_pair(q, 2, 4, true) * r_pair(q, 1, 3, true) * r_pair(q, 2, 3) *
                           r_pair(q, 3, 4) * r_pair(q, 1, 2);
  Eigen::MatrixXcd lhs = wrong * boxplus_op("S+", q, 2, 2).dense();
  EXPECT_GT(max_abs(Eigen::MatrixXcd(lhs - boxplus_perm("S+", q) * wrong)), 1e-3);
}

TEST(RMatrixChain, PrintedEndpoints) {
  for (const char* g : {"S+", "S-"}) {
    auto chain = printed_chain(g);
    ASSERT_EQ(chain.size(), 7u);
    EXPECT_TRUE(sums_equal(chain.front(), boxplus(make_uq_symbolic(2.0), g, 2, 2)));
    EXPECT_TRUE(sums_equal(chain.back(), boxplus_perm_sum(g)));
  }
}

TEST(RMatrixChain, SymbolicAndNumericSteps) {
  for (const char* g : {"S+", "S-"}) {
    auto rep = check_chain(g, kFewQ);
    EXPECT_TRUE(rep.passed()) << failures(rep);
    EXPECT_EQ(rep.instances.size(), 2u + 6u * (1u + kFewQ.size()));
  }
}

TEST(RMatrixChain, StepNames) {
  const auto& s = chain_steps();
  ASSERT_EQ(s.size(), 6u);
  EXPECT_EQ(s[0].name(), "R12 (.) R12^-1");
  EXPECT_EQ(s[2].name(), "R23^-1 (.) R23");
}

TEST(RMatrixChain, SymbolicRuleRejectsMixedPairs) {
  FormalSum s({2, 2});
  // Labels 1, 2 are linear sites 3, 4; K+ K- on them cannot pass through R12.
  s.add_term(FormalSum::Cells{"K-", "K-", "K+", "K-"}, 1.0);
  EXPECT_THROW(conjugate_symbolic(s, chain_steps()[0]), DomainError);
  FormalSum lone({2, 2});
  lone.add_term(FormalSum::Cells{"K-", "K-", "S+", "K+"}, 1.0);
  EXPECT_THROW(conjugate_symbolic(lone, chain_steps()[0]), DomainError);
}

TEST(RMatrixChain, SymbolicRuleMatchesConjugationOnPair) {
  FormalSum s({2, 2});
  s.add_term(FormalSum::Cells{"K+", "K+", "S+", "K+"}, 1.0);
  s.add_term(FormalSum::Cells{"K+", "K+", "K-", "S+"}, 1.0);
  auto out = conjugate_symbolic(s, chain_steps()[0]);
  FormalSum want({2, 2});
  want.add_term(FormalSum::Cells{"K+", "K+", "S+", "K-"}, 1.0);
  want.add_term(FormalSum::Cells{"K+", "K+", "K+", "S+"}, 1.0);
  EXPECT_TRUE(sums_equal(out, want));
  const cplx q = 1.9;
  const auto rep = spin_half_rep(q).as_representation();
  Eigen::MatrixXcd conj = r_pair(q, 1, 2) * evaluate(s, rep).dense() * r_pair(q, 1, 2, true);
  EXPECT_LT(max_abs(Eigen::MatrixXcd(conj - evaluate(want, rep).dense())), 1e-12);
}

TEST(Classical, Identities) {
  auto rep = check_classical_identities();
  EXPECT_TRUE(rep.passed()) << failures(rep);
}

TEST(Classical, R2dTrace) {
  // trace(r) = 1 on two sites, 4 on the plaquette; two plus and four minus
  // signs give 4 * (2 - 4).
  EXPECT_NEAR(std::abs(classical_r2d().trace() - cplx(-8.0)), 0.0, 1e-12);
}

TEST(Semiclassical, SlopesNearOne) {
  auto f1 = semiclassical_fit_1d(kSemiclassicalH);
  auto f2 = semiclassical_fit_2d(kSemiclassicalH);
  EXPECT_NEAR(f1.slope, 1.0, 0.1);
  EXPECT_NEAR(f2.slope, 1.0, 0.1);
  // Halving h roughly halves the error (second-order terms still show at h = 0.2).
  for (const auto& f : {f1, f2})
    for (std::size_t k = 1; k < f.error.size(); ++k) {
      double ratio = f.error[k - 1] / f.error[k];
      EXPECT_GT(ratio, 1.7) << f.name;
      EXPECT_LT(ratio, 2.3) << f.name;
    }
  auto rep = check_semiclassical();
  EXPECT_TRUE(rep.passed()) << failures(rep);
  auto j = to_json(f2);
  EXPECT_EQ(j["h"].size(), 5u);
  EXPECT_TRUE(j.contains("slope"));
}

TEST(Semiclassical, RejectsBadGrids) {
  EXPECT_THROW(check_semiclassical({0.1, 0.05}), ConfigError);
  EXPECT_THROW(check_semiclassical({0.5, 0.1, 0.05, 0.01}), ConfigError);
  EXPECT_THROW(semiclassical_fit_1d({0.1, 0.1}), NumericalError);
}
