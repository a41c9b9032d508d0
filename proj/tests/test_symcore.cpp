#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lat2d/symcore.hpp"

using namespace lat2d;

namespace {

GridWord w1(const std::string& s) { return GridWord({1, 1}, {s}); }

Representation spin_half(double q) {
  Representation rep;
  rep.alphabet = {"K+", "S+", "S-", "1"};
  rep.dim = 2;
  Eigen::MatrixXcd kp = Eigen::MatrixXcd::Zero(2, 2), sp = Eigen::MatrixXcd::Zero(2, 2);
  kp(0, 0) = std::sqrt(q);
  kp(1, 1) = 1.0 / std::sqrt(q);
  sp(0, 1) = 1.0;
  rep.matrices["K+"] = kp;
  rep.matrices["S+"] = sp;
  rep.matrices["S-"] = sp.transpose();
  rep.matrices["1"] = Eigen::MatrixXcd::Identity(2, 2);
  return rep;
}

FormalSum random_sum(std::mt19937& rng, Shape s, const std::vector<std::string>& alphabet, int terms) {
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::normal_distribution<double> coef;
  FormalSum out(s);
  for (int t = 0; t < terms; ++t) {
    std::vector<std::string> cells;
    for (int k = 0; k < s.sites(); ++k) cells.push_back(alphabet[pick(rng)]);
    out.add_term(cells, {coef(rng), coef(rng)});
  }
  return out;
}

}  // namespace

TEST(SiteIndex, BottomRowFirst) {
  EXPECT_EQ(site_index(1, 1, {3, 3}), 1);
  EXPECT_EQ(site_index(3, 3, {3, 3}), 9);
  EXPECT_EQ(site_index(2, 1, {3, 3}), 4);
  EXPECT_EQ(site_index(1, 1, {1, 1}), 1);
  EXPECT_THROW(site_index(0, 1, {2, 2}), RangeError);
  EXPECT_THROW(site_index(1, 3, {2, 2}), RangeError);
}

TEST(SiteIndex, BijectiveUpToFourByFour) {
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m) {
      std::vector<int> seen(static_cast<std::size_t>(n * m), 0);
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= m; ++j) ++seen[static_cast<std::size_t>(site_index(i, j, {n, m}) - 1)];
      for (int c : seen) EXPECT_EQ(c, 1);
    }
}

TEST(GridWord, RowsAndColumns) {
  auto g = grid_from_rows({{"a", "v"}, {"b", "b"}});
  EXPECT_EQ(g.at(2, 2), "v");
  EXPECT_EQ(g.at(1, 1), "b");
  EXPECT_EQ(g.column(2), make_column({"b", "v"}));
  EXPECT_EQ(g.row(2), make_row({"a", "v"}));
  EXPECT_EQ(to_string(g), "(a v / b b)");
  EXPECT_THROW(GridWord({2, 2}, {"a"}), ShapeError);
}

TEST(FormalSum, Arithmetic) {
  auto v = w1("v");
  EXPECT_TRUE(sums_equal(sum_add(FormalSum::of(v, 2.0), FormalSum::of(v, 3.0)), FormalSum::of(v, 5.0)));
  EXPECT_TRUE(sum_scale(FormalSum::of(v) + FormalSum::of(w1("a")), 0.0).empty());
  EXPECT_TRUE((FormalSum::of(v) - FormalSum::of(v)).empty());
  EXPECT_THROW(sum_add(FormalSum::of(v), FormalSum::of(make_row({"a", "b"}))), ShapeError);
}

TEST(FormalSum, AddThenScaleEqualsScaleThenAdd) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_sum(rng, {2, 2}, {"a", "b", "v"}, 5), b = random_sum(rng, {2, 2}, {"a", "b", "v"}, 5);
    cplx c(0.3 * trial - 2.0, 0.7);
    EXPECT_LT(max_coeff_diff(sum_scale(a + b, c), sum_scale(a, c) + sum_scale(b, c)), 1e-12);
    EXPECT_LT(max_coeff_diff(a + b, b + a), 1e-12);
  }
}

TEST(FormalSum, Comparison) {
  auto g = FormalSum::of(w1("g"));
  EXPECT_TRUE(sums_equal(g, g));
  EXPECT_TRUE(sums_equal(g, FormalSum::of(w1("g"), 1.0 + 1e-12)));
  EXPECT_FALSE(sums_equal(FormalSum::of(w1("v")), FormalSum::of(w1("a")), 0.5));
}

TEST(Concat, Juxtaposition) {
  EXPECT_EQ(concat_h(w1("v"), w1("b")), make_row({"v", "b"}));
  EXPECT_EQ(concat_v(w1("v"), w1("b")), make_column({"v", "b"}));
  // Pivot x-splitter output on a 2-column reproduces the 2x2 grids.
  auto left = FormalSum::of(make_column({"v", "b"})) + FormalSum::of(make_column({"a", "v"}));
  auto right = FormalSum::of(make_column({"b", "b"}));
  auto s = concat_h(left, right);
  EXPECT_EQ(s.coeff(grid_from_rows({{"b", "b"}, {"v", "b"}}).cells), cplx(1.0));
  EXPECT_EQ(s.coeff(grid_from_rows({{"v", "b"}, {"a", "b"}}).cells), cplx(1.0));
  EXPECT_THROW(concat_h(w1("a"), make_column({"a", "b"})), ShapeError);
}

TEST(Concat, Bilinear) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_sum(rng, {2, 1}, {"a", "b"}, 3), a2 = random_sum(rng, {2, 1}, {"a", "b"}, 3);
    auto b = random_sum(rng, {2, 2}, {"a", "v"}, 3);
    EXPECT_LT(max_coeff_diff(concat_h(a + a2, b), concat_h(a, b) + concat_h(a2, b)), 1e-12);
  }
}

TEST(Evaluate, SingleSiteAndIdentity) {
  auto rep = spin_half(2.0);
  auto k = evaluate(FormalSum::of(w1("K+")), rep).dense();
  EXPECT_NEAR(std::abs(k(0, 0) - std::sqrt(2.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(k(1, 1) - 1.0 / std::sqrt(2.0)), 0.0, 1e-14);
  auto id = evaluate(FormalSum::of(uniform_word({2, 2}, "K+")), spin_half(1.0));
  EXPECT_LT(max_abs_diff(id, SparseOperator::identity(16)), 1e-14);
  EXPECT_THROW(evaluate(FormalSum::of(w1("zz")), rep), RepresentationError);
}

TEST(Evaluate, SiteOneIsLeftmostFactor) {
  auto rep = spin_half(3.0);
  for (Shape s : {Shape{1, 2}, Shape{2, 1}})
    for (const std::string& x : {"K+", "S+", "1"})
      for (const std::string& y : {"K+", "S+", "S-"}) {
        GridWord w(s, {x, y});
        Eigen::MatrixXcd want = kron_sites({rep.matrix(x), rep.matrix(y)}).dense();
        Eigen::MatrixXcd manual(4, 4);
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c) manual(r, c) = rep.matrix(x)(r / 2, c / 2) * rep.matrix(y)(r % 2, c % 2);
        EXPECT_LT(max_abs(evaluate(FormalSum::of(w), rep).dense() - manual), 1e-14);
        EXPECT_LT(max_abs(want - manual), 1e-14);
      }
}

TEST(Evaluate, Linear) {
  std::mt19937 rng(3);
  auto rep = spin_half(1.7);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_sum(rng, {2, 2}, {"K+", "S+", "S-", "1"}, 4);
    auto b = random_sum(rng, {2, 2}, {"K+", "S+", "S-", "1"}, 4);
    cplx al(0.5, -1.0), be(2.0, 0.25);
    auto lhs = evaluate(sum_scale(a, al) + sum_scale(b, be), rep);
    auto rhs = al * evaluate(a, rep) + be * evaluate(b, rep);
    EXPECT_LT(max_abs_diff(lhs, rhs), 1e-10);
  }
}

TEST(Evaluate, RespectsDimensionCap) {
  EXPECT_THROW(evaluate(FormalSum::of(uniform_word({2, 2}, "1")), spin_half(1.0), 8), ResourceError);
}

TEST(MatrixMarket, HeaderAndRoundTrip) {
  auto rep = spin_half(1.3);
  FormalSum s = FormalSum::of(make_row({"S+", "K+"})) + FormalSum::of(make_row({"K+", "S-"}), cplx(0.0, 2.0));
  auto op = evaluate(s, rep);
  std::stringstream ss;
  write_matrix_market(ss, op);
  std::string first;
  std::getline(ss, first);
  EXPECT_EQ(first, "%%MatrixMarket matrix coordinate complex general");
  ss.seekg(0);
  auto back = read_matrix_market(ss);
  EXPECT_EQ(back.dim(), 4);
  EXPECT_LT(max_abs_diff(op, back), 1e-15);
}

TEST(Json, FormalSumRoundTrip) {
  FormalSum s = FormalSum::of(make_row({"a", "v"}), cplx(1.0, -0.5)) + FormalSum::of(make_row({"v", "b"}));
  auto j = to_json(s);
  EXPECT_EQ(j["shape"], nlohmann::json::array({1, 2}));
  EXPECT_TRUE(sums_equal(formal_sum_from_json(j), s, 0.0));
}
