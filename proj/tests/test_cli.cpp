#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lat2d/cli.hpp"
#include "lat2d/rmatrix.hpp"

using namespace lat2d;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("lat2d_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string out(const std::string& sub = "out") const { return (dir_ / sub).string(); }

  static std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  }
  static nlohmann::json load(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

  fs::path dir_;
};

}  // namespace

TEST(CliParse, QValues) {
  EXPECT_EQ(parse_q("2"), cplx(2.0));
  EXPECT_EQ(parse_q("-0.5"), cplx(-0.5));
  EXPECT_EQ(parse_q("1.3+0.2i"), cplx(1.3, 0.2));
  EXPECT_EQ(parse_q("0.8-1i"), cplx(0.8, -1.0));
  EXPECT_EQ(parse_q("2i"), cplx(0.0, 2.0));
  EXPECT_EQ(parse_q("1e-1"), cplx(0.1));
  EXPECT_THROW(parse_q("two"), ConfigError);
  EXPECT_THROW(parse_q(""), ConfigError);
  EXPECT_EQ(format_q(cplx(1.3, -0.2)), "1.3-0.2i");
  EXPECT_EQ(parse_q(format_q(cplx(0.7, 0.25))), cplx(0.7, 0.25));
}

TEST(CliParse, ConfigJsonRoundTrip) {
  RunConfig c;
  c.command = "verify";
  c.example = "uq";
  c.q = {2.0, cplx(0.5, 0.5)};
  c.sizes = {{2, 3}};
  c.checks = {"ks"};
  c.seed = 7;
  RunConfig back = run_config_from_json(to_json(c));
  EXPECT_EQ(back.q, c.q);
  EXPECT_EQ(back.sizes.at(0), (Shape{2, 3}));
  EXPECT_EQ(back.seed, 7u);
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_THROW(run_config_from_json({{"exampel", "uq"}}), ConfigError);
  EXPECT_THROW(run_config_from_json({{"sizes", {"2by2"}}}), ConfigError);
  auto mixed = run_config_from_json({{"q", {2, "1+1i", {0.5, -0.5}}}});
  EXPECT_EQ(mixed.q, (std::vector<cplx>{2.0, cplx(1, 1), cplx(0.5, -0.5)}));
}

TEST(CliParse, SeededQsFollowTheSeed) {
  RunConfig c;
  c.random_q = 3;
  c.q = {2.0};
  auto qs = q_values(c);
  ASSERT_EQ(qs.size(), 4u);
  EXPECT_EQ(qs[0], cplx(2.0));
  EXPECT_EQ(qs[1], seeded_qs(42, 3)[0]);
}

TEST_F(Cli, VerifyPivotSuitePasses) {
  auto r = run({"verify", "--example", "pivot", "--sizes", "2x2,3x3", "--checks", "assoc,xycompat,counit", "--out", out()});
  EXPECT_EQ(r.code, kExitPass) << r.out << r.err;
  for (const char* f : {"assoc.json", "xycompat.json", "counit.json", "summary.json"})
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  auto rep = load(dir_ / "out" / "xycompat.json");
  EXPECT_EQ(rep["seed"], 42);
  EXPECT_EQ(rep["passed"], true);
  EXPECT_EQ(rep["results"].size(), 2u);
  EXPECT_EQ(rep["results"][1]["size"], "3x3");
  // Keys are written in sorted order.
  std::string text = slurp(dir_ / "out" / "xycompat.json");
  EXPECT_LT(text.find("\"check\""), text.find("\"config\""));
  EXPECT_LT(text.find("\"config\""), text.find("\"seed\""));
}

TEST_F(Cli, VerifyUqChecksPass) {
  auto r = run({"verify", "--example", "uq", "--q", "2.0", "--checks", "ks,commutator,kernel", "--out", out()});
  EXPECT_EQ(r.code, kExitPass) << r.out << r.err;
  auto kernel = load(dir_ / "out" / "kernel.json");
  EXPECT_EQ(kernel["results"][0]["details"]["kernel_dim"], 2);
}

TEST_F(Cli, VerifyUqRMatrixAndSinglets) {
  auto r = run({"verify", "--example", "uq", "--q", "2", "--q", "0.8+0.6i", "--random-q", "2", "--checks",
                "singlets,rmatrix,rmatrix2d,chain,classical,semiclassical,families,proposition", "--out", out()});
  EXPECT_EQ(r.code, kExitPass) << r.out << r.err;
  auto prop = load(dir_ / "out" / "proposition.json");
  EXPECT_EQ(prop["results"][0]["premise_holds"], false);
}

TEST_F(Cli, SingularQIsAConfigError) {
  auto r = run({"verify", "--example", "uq", "--q", "1.0", "--checks", "commutator", "--out", out()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("singular"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
  // Checks that never divide by q - 1/q accept q = 1.
  EXPECT_EQ(run({"verify", "--example", "uq", "--q", "1", "--checks", "ks", "--out", out()}).code, kExitPass);
}

TEST_F(Cli, InvalidConfigurationsExitTwo) {
  EXPECT_EQ(run({"verify", "--example", "pivot", "--checks", "nonsense", "--out", out()}).code, kExitConfig);
  EXPECT_EQ(run({"verify", "--example", "pivot", "--checks", "ks", "--out", out()}).code, kExitConfig);
  EXPECT_EQ(run({"verify", "--example", "pivot", "--q", "2", "--out", out()}).code, kExitConfig);
  EXPECT_EQ(run({"verify", "--example", "uq", "--out", out()}).code, kExitConfig);
  EXPECT_EQ(run({"verify", "--example", "pivot", "--sizes", "2by2", "--out", out()}).code, kExitConfig);
  EXPECT_EQ(run({"verify", "--example", "pivot", "--tol", "-1", "--out", out()}).code, kExitConfig);
  EXPECT_EQ(run({"verify", "--example", "nowhere", "--out", out()}).code, kExitConfig);
  EXPECT_EQ(run({"verify", "--no-such-flag"}).code, kExitConfig);
  EXPECT_EQ(run({}).code, kExitConfig);
  EXPECT_EQ(run({"verify", "--example", "uq", "--q", "0", "--checks", "ks", "--out", out()}).code, kExitConfig);
  EXPECT_EQ(run({"verify", "--config", (dir_ / "missing.json").string()}).code, kExitConfig);
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  {
    std::ofstream os(dir_ / "cfg.json");
    os << R"({"example": "uq", "q": ["2"], "checks": ["ks"], "sizes": ["2x2"], "seed": 5, "out": ")" << out("a")
       << R"("})";
  }
  auto r = run({"verify", "--config", (dir_ / "cfg.json").string(), "--sizes", "2x3"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  auto rep = load(dir_ / "a" / "ks.json");
  EXPECT_EQ(rep["seed"], 5);
  EXPECT_EQ(rep["config"]["sizes"], nlohmann::json::array({"2x3"}));
  EXPECT_EQ(rep["results"][0]["size"], "2x3");
  {
    std::ofstream os(dir_ / "bad.json");
    os << R"({"example": "uq", "colour": "red"})";
  }
  EXPECT_EQ(run({"verify", "--config", (dir_ / "bad.json").string()}).code, kExitConfig);
}

TEST_F(Cli, ReportsAreByteIdenticalAcrossRuns) {
  std::vector<std::string> base = {"verify", "--example", "uq", "--q", "2", "--random-q", "3",
                                   "--checks", "ks,singlets,rmatrix2d", "--sizes", "2x2"};
  auto a = base, b = base, c = base;
  a.insert(a.end(), {"--out", out("a")});
  b.insert(b.end(), {"--out", out("b")});
  c.insert(c.end(), {"--out", out("c"), "--seed", "7"});
  ASSERT_EQ(run(a).code, kExitPass);
  ASSERT_EQ(run(b).code, kExitPass);
  ASSERT_EQ(run(c).code, kExitPass);
  for (const char* f : {"ks.json", "singlets.json", "rmatrix2d.json", "summary.json"}) {
    std::string ta = slurp(dir_ / "a" / f), tb = slurp(dir_ / "b" / f), tc = slurp(dir_ / "c" / f);
    EXPECT_EQ(ta, tb) << f;
    EXPECT_NE(ta, tc) << f;
  }
  EXPECT_EQ(load(dir_ / "c" / "ks.json")["seed"], 7);
}

TEST_F(Cli, BuildOpBoxplus) {
  auto r = run({"build-op", "--gen", "S+", "--q", "1.3", "--size", "2x3", "--out", out()});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  auto manifest = load(dir_ / "out" / "manifest.json");
  ASSERT_EQ(manifest["operators"].size(), 1u);
  const auto& op = manifest["operators"][0];
  EXPECT_EQ(op["generator"], "S+");
  EXPECT_EQ(op["dim"], 64);
  EXPECT_EQ(op["n"], 2);
  EXPECT_EQ(op["m"], 3);
  const std::string text = slurp(dir_ / "out" / op["file"].get<std::string>());
  EXPECT_EQ(text.substr(0, text.find('\n')), "%%MatrixMarket matrix coordinate complex general");
  std::istringstream is(text);
  auto read = read_matrix_market(is);
  EXPECT_EQ(read.dim(), 64);
  EXPECT_EQ(read.nnz(), op["nnz"].get<long>());
  EXPECT_LT(max_abs_diff(read, boxplus_op("S+", 1.3, 2, 3)), 1e-15);
}

TEST_F(Cli, BuildOpKPlusIsDiagonal) {
  ASSERT_EQ(run({"build-op", "--gen", "K+", "--q", "2", "--size", "2x2", "--out", out()}).code, kExitPass);
  auto manifest = load(dir_ / "out" / "manifest.json");
  std::ifstream is(dir_ / "out" / manifest["operators"][0]["file"].get<std::string>());
  auto op = read_matrix_market(is).dense();
  ASSERT_EQ(op.rows(), 16);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) {
      if (r != c) {
        EXPECT_EQ(op(r, c), cplx(0.0));
        continue;
      }
      int ones = __builtin_popcount(static_cast<unsigned>(r));
      EXPECT_NEAR(std::abs(op(r, r) - std::pow(2.0, (4 - 2 * ones) / 2.0)), 0.0, 1e-12) << r;
    }
}

TEST_F(Cli, BuildOpRMatrices) {
  ASSERT_EQ(run({"build-op", "--rmatrix2d", "--rmatrix", "--q", "1.5", "--out", out()}).code, kExitPass);
  auto manifest = load(dir_ / "out" / "manifest.json");
  ASSERT_EQ(manifest["operators"].size(), 2u);
  EXPECT_EQ(manifest["operators"][0]["dim"], 4);
  EXPECT_EQ(manifest["operators"][1]["dim"], 16);
  std::ifstream is(dir_ / "out" / manifest["operators"][1]["file"].get<std::string>());
  EXPECT_LT(max_abs(Eigen::MatrixXcd(read_matrix_market(is).dense() - r2d(1.5))), 1e-15);
}

TEST_F(Cli, BuildOpLimits) {
  EXPECT_EQ(run({"build-op", "--gen", "S+", "--q", "2", "--size", "4x4", "--out", out()}).code, kExitConfig);
  EXPECT_EQ(run({"build-op", "--gen", "Q", "--q", "2", "--out", out()}).code, kExitConfig);
  EXPECT_EQ(run({"build-op", "--gen", "S+", "--out", out()}).code, kExitConfig);
}

TEST_F(Cli, PepsAmendedTensorPasses) {
  auto r = run({"peps", "--rep", "d4-amended", "--out", out()});
  EXPECT_EQ(r.code, kExitPass) << r.out;
  auto rep = load(dir_ / "out" / "peps_d4-amended.json");
  EXPECT_EQ(rep["report"]["instances"].size(), 7u);
}

TEST_F(Cli, PepsListedTensorReportsSpuriousGrid) {
  auto r = run({"peps", "--rep", "d4", "--sizes", "1x1,1x2,2x2,3x3", "--out", out()});
  EXPECT_EQ(r.code, kExitFail);
  EXPECT_NE(r.out.find("(v b / a v)"), std::string::npos) << r.out;
}

TEST_F(Cli, PepsMutation) {
  EXPECT_EQ(run({"peps", "--rep", "d4-amended", "--mutate", "drop:4", "--sizes", "1x1", "--out", out()}).code,
            kExitFail);
  // Component 0 carries a vertical bond and never occurs in a single row.
  EXPECT_EQ(run({"peps", "--rep", "d4-amended", "--mutate", "drop:0", "--sizes", "1x2", "--out", out()}).code,
            kExitPass);
  EXPECT_EQ(run({"peps", "--rep", "d4-amended", "--mutate", "drop:0", "--sizes", "2x2", "--out", out()}).code,
            kExitFail);
  EXPECT_EQ(run({"peps", "--rep", "d4-amended", "--mutate", "scan", "--out", out()}).code, kExitPass);
  auto scan = load(dir_ / "out" / "mutation_scan_d4-amended.json");
  EXPECT_EQ(scan["mutations"][4]["first_detected"], "1x1");
  EXPECT_EQ(run({"peps", "--rep", "d4", "--mutate", "drop:9", "--out", out()}).code, kExitConfig);
  EXPECT_EQ(run({"peps", "--rep", "d4", "--mutate", "flip:1", "--out", out()}).code, kExitConfig);
}

TEST_F(Cli, PepsSolveBoundaryWritesGoldenReport) {
  auto r = run({"peps", "--rep", "d2", "--solve-boundary", "--out", out()});
  EXPECT_EQ(r.code, kExitPass) << r.out << r.err;
  EXPECT_NE(r.out.find("certified infeasible"), std::string::npos);
  EXPECT_EQ(slurp(dir_ / "out" / "d2_boundary_report.json"),
            slurp(fs::path(LAT2D_DATA_DIR) / "d2_boundary_report.json"));
  auto summary = load(dir_ / "out" / "peps_d2.json");
  EXPECT_EQ(summary["certified_infeasible"], true);
  EXPECT_EQ(run({"peps", "--rep", "d2", "--out", out()}).code, kExitConfig);
  EXPECT_EQ(run({"peps", "--rep", "d4", "--solve-boundary", "--out", out()}).code, kExitConfig);
  EXPECT_EQ(run({"peps", "--rep", "d4", "--sizes", "3x4", "--out", out()}).code, kExitConfig);
}
