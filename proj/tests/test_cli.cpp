#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "hilbertmark/bench.hpp"
#include "hilbertmark/cli.hpp"
#include "hilbertmark/image_io.hpp"
#include "oracles.hpp"

namespace hm = hilbertmark;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hilbertmark-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    std::mt19937_64 rng(1);
    hm::save_image(oracle::random_image(rng, 32, 32), path("h.pgm"));
    hm::save_image(oracle::random_image(rng, 32, 32), path("w.pgm"));
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "hilbertmark");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return hm::run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(Cli, EmbedThenExtract) {
  ASSERT_EQ(run({"embed", "--host", path("h.pgm"), "--watermark", path("w.pgm"), "--lambda", "0.0018", "--out",
                 path("m.pgm")}),
            hm::kExitOk)
      << err_.str();
  ASSERT_EQ(run({"extract", "--host", path("h.pgm"), "--watermark", path("w.pgm"), "--marked", path("m.pgm"),
                 "--lambda", "0.0018", "--out", path("e.pgm")}),
            hm::kExitOk)
      << err_.str();
  EXPECT_NE(out_.str().find("floored_pixels=0"), std::string::npos);
  EXPECT_EQ(hm::load_image(path("e.pgm")).width(), 32);
}

TEST_F(Cli, MetricsIdentical) {
  ASSERT_EQ(run({"metrics", "--ref", path("h.pgm"), "--test", path("h.pgm")}), hm::kExitOk);
  EXPECT_NE(out_.str().find("rmse=0 psnr=inf"), std::string::npos) << out_.str();
}

TEST_F(Cli, DiffAndAttack) {
  ASSERT_EQ(run({"attack", "--in", path("h.pgm"), "--attack", "gaussian_noise", "--seed", "3", "--out",
                 path("n.png")}),
            hm::kExitOk)
      << err_.str();
  ASSERT_EQ(run({"diff", "--a", path("h.pgm"), "--b", path("n.png"), "--out", path("d.pgm")}), hm::kExitOk);
  EXPECT_GT(hm::load_image(path("d.pgm")).pixels().maxCoeff(), 0);
}

TEST_F(Cli, OptimizeWritesCurves) {
  ASSERT_EQ(run({"optimize-lambda", "--host", path("h.pgm"), "--watermark", path("w.pgm"), "--curve",
                 path("f.csv"), "--rmse-curve", path("r.csv"), "--grid-points", "20"}),
            hm::kExitOk)
      << err_.str();
  EXPECT_NE(out_.str().find("lambda_star="), std::string::npos);
  std::ifstream f(path("f.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(f, line)) ++lines;
  EXPECT_EQ(lines, 21);
  EXPECT_TRUE(fs::exists(path("r.csv")));
  EXPECT_EQ(run({"optimize-lambda", "--host", path("h.pgm"), "--watermark", path("w.pgm"), "--eps", "measured"}),
            hm::kExitOk)
      << err_.str();
}

TEST_F(Cli, BenchTable1RowSet) {
  ASSERT_EQ(run({"bench", "--host", path("h.pgm"), "--watermark", path("w.pgm"), "--lambda", "auto", "--attacks",
                 "table1", "--report", path("out.csv")}),
            hm::kExitOk)
      << err_.str();
  const auto bytes = hm::read_file(path("out.csv"));
  const auto rows = hm::parse_report_csv(std::string(bytes.begin(), bytes.end()));
  const auto preset = hm::attack_preset("table1");
  ASSERT_EQ(rows.size(), preset.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].label, preset[i].label);
}

TEST_F(Cli, BenchMarkdownToStdout) {
  ASSERT_EQ(run({"bench", "--host", path("h.pgm"), "--watermark", path("w.pgm"), "--lambda", "0.002", "--attacks",
                 "none;jpeg:q=50", "--report-format", "md", "--peak", "255"}),
            hm::kExitOk)
      << err_.str();
  EXPECT_NE(out_.str().find("peak=255"), std::string::npos);
  EXPECT_NE(out_.str().find("| jpeg:q=50 |"), std::string::npos);
}

TEST_F(Cli, ConfigSuppliesJpeg2000Command) {
  {
    std::ofstream cfg(path("cfg.json"));
    cfg << R"({"jp2_cmd": "cp {in} {out}"})";
  }
  ASSERT_EQ(run({"attack", "--in", path("h.pgm"), "--attack", "jpeg2000:ratio=4", "--out", path("j.pgm"),
                 "--config", path("cfg.json")}),
            hm::kExitOk)
      << err_.str();
  EXPECT_EQ(hm::load_image(path("j.pgm")), hm::load_image(path("h.pgm")));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}), hm::kExitUsageError);
  EXPECT_EQ(run({"frobnicate"}), hm::kExitUsageError);
  EXPECT_EQ(run({"embed", "--host", path("h.pgm")}), hm::kExitUsageError);
  EXPECT_EQ(run({"metrics", "--ref", path("h.pgm"), "--test", path("h.pgm"), "--peak", "300"}), hm::kExitUsageError);
  EXPECT_EQ(run({"attack", "--in", path("h.pgm"), "--attack", "jpeg:q=0", "--out", path("x.pgm")}),
            hm::kExitUsageError);
  EXPECT_EQ(run({"bench", "--host", path("h.pgm"), "--watermark", path("w.pgm"), "--lambda", "-1"}),
            hm::kExitUsageError);
  EXPECT_EQ(run({"extract", "--host", path("h.pgm"), "--watermark", path("w.pgm"), "--marked", path("h.pgm"),
                 "--lambda", "0", "--out", path("e.pgm")}),
            hm::kExitUsageError);
  EXPECT_EQ(run({"--help"}), hm::kExitOk);
}

TEST_F(Cli, DataErrors) {
  EXPECT_EQ(run({"metrics", "--ref", path("missing.pgm"), "--test", path("h.pgm")}), hm::kExitDataError);
  hm::save_image(hm::GrayImage(4, 4), path("small.pgm"));
  EXPECT_EQ(run({"metrics", "--ref", path("small.pgm"), "--test", path("h.pgm")}), hm::kExitDataError);
  EXPECT_EQ(run({"attack", "--in", path("h.pgm"), "--attack", "jpeg2000", "--out", path("x.pgm")}),
            hm::kExitDataError);
}
