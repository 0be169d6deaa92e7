#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hilbertmark/hilbert.hpp"
#include "oracles.hpp"

namespace hm = hilbertmark;

TEST(AnalyticSignal, ConstantHasNoQuadrature) {
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(4, 5.0);
  const auto z = hm::analytic_signal(x);
  for (int k = 0; k < 4; ++k) {
    EXPECT_DOUBLE_EQ(z(k).real(), 5.0);
    EXPECT_NEAR(z(k).imag(), 0.0, 1e-12);
  }
}

TEST(AnalyticSignal, CosineBecomesComplexExponential) {
  Eigen::VectorXd x(8);
  for (int k = 0; k < 8; ++k) x(k) = std::cos(2.0 * std::numbers::pi * k / 8.0);
  const auto z = hm::analytic_signal(x);
  for (int k = 0; k < 8; ++k) {
    const double ang = 2.0 * std::numbers::pi * k / 8.0;
    EXPECT_NEAR(z(k).real(), std::cos(ang), 1e-12);
    EXPECT_NEAR(z(k).imag(), std::sin(ang), 1e-12);
  }
}

TEST(AnalyticSignal, MatchesNaiveDftLength7) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-50.0, 200.0);
  std::vector<double> x(7);
  for (auto& v : x) v = dist(rng);
  const auto fast = hm::analytic_signal(Eigen::Map<Eigen::VectorXd>(x.data(), 7));
  const auto slow = oracle::analytic(x);
  for (int k = 0; k < 7; ++k) EXPECT_LT(std::abs(fast(k) - slow[k]), 1e-10) << k;
}

TEST(AnalyticSignal, MatchesNaiveDftAllShortLengths) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 255.0);
  for (int n = 1; n <= 32; ++n) {
    std::vector<double> x(n);
    for (auto& v : x) v = dist(rng);
    const auto fast = hm::analytic_signal(Eigen::Map<Eigen::VectorXd>(x.data(), n));
    const auto slow = oracle::analytic(x);
    for (int k = 0; k < n; ++k) ASSERT_LT(std::abs(fast(k) - slow[k]), 1e-10) << "n=" << n;
  }
}

TEST(AnalyticSignal, SinglePrecision) {
  Eigen::VectorXf x(16);
  for (int k = 0; k < 16; ++k) x(k) = std::cos(2.0f * std::numbers::pi_v<float> * 3 * k / 16.0f);
  const auto z = hm::analytic_signal(x);
  for (int k = 0; k < 16; ++k) EXPECT_NEAR(std::abs(z(k)), 1.0f, 1e-5f);
}

TEST(AnalyticSignal, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(hm::analytic_signal(Eigen::VectorXd()), hm::ValidationError);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(4);
  bad(2) = std::nan("");
  EXPECT_THROW(hm::analytic_signal(bad), hm::ValidationError);
}

TEST(BinWeight, Layout) {
  EXPECT_EQ(hm::analytic_bin_weight<double>(0, 8), 1.0);
  EXPECT_EQ(hm::analytic_bin_weight<double>(3, 8), 2.0);
  EXPECT_EQ(hm::analytic_bin_weight<double>(4, 8), 1.0);
  EXPECT_EQ(hm::analytic_bin_weight<double>(5, 8), 0.0);
  EXPECT_EQ(hm::analytic_bin_weight<double>(3, 7), 2.0);
  EXPECT_EQ(hm::analytic_bin_weight<double>(4, 7), 0.0);
}

TEST(Decompose, ZeroField) {
  const auto dec = hm::decompose(Eigen::MatrixXd::Zero(4, 4));
  EXPECT_EQ(dec.amplitude.maxCoeff(), 0.0);
  EXPECT_EQ(dec.phase.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Decompose, ConstantField) {
  const auto dec = hm::decompose(Eigen::MatrixXd::Constant(5, 3, 7.0));
  EXPECT_NEAR((dec.amplitude.array() - 7.0).abs().maxCoeff(), 0.0, 1e-12);
  EXPECT_NEAR(dec.phase.cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(Decompose, MatchesOracleBothAxes) {
  std::mt19937_64 rng(5);
  const hm::RealField x = oracle::random_image(rng, 6, 5).to_real();
  for (const bool rows : {false, true}) {
    const auto dec = hm::decompose(x, rows ? hm::Axis::rows : hm::Axis::columns);
    const auto ref = oracle::polar(x, rows);
    EXPECT_LT((dec.amplitude - ref.amp).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((dec.phase - ref.phase).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Decompose, InvariantsAndRoundTrip) {
  std::mt19937_64 rng(6);
  const hm::RealField x = oracle::random_image(rng, 64, 64).to_real();
  for (const auto axis : {hm::Axis::columns, hm::Axis::rows}) {
    const auto dec = hm::decompose(x, axis);
    EXPECT_GE(dec.amplitude.minCoeff(), 0.0);
    EXPECT_GT(dec.phase.minCoeff(), -std::numbers::pi);
    EXPECT_LE(dec.phase.maxCoeff(), std::numbers::pi);
    EXPECT_LE((hm::reconstruct(dec) - x).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Decompose, RowsAxisIsTransposeOfColumns) {
  std::mt19937_64 rng(8);
  const hm::RealField x = oracle::random_image(rng, 9, 12).to_real();
  const auto by_rows = hm::decompose(x, hm::Axis::rows);
  const auto by_cols = hm::decompose(hm::RealField(x.transpose()), hm::Axis::columns);
  EXPECT_LT((by_rows.amplitude - by_cols.amplitude.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Reconstruct, Trivial) {
  hm::Decomposition ones{Eigen::MatrixXd::Ones(2, 3), Eigen::MatrixXd::Zero(2, 3)};
  EXPECT_EQ(hm::reconstruct(ones), Eigen::MatrixXd::Ones(2, 3));
  hm::Decomposition neg{Eigen::MatrixXd::Constant(2, 2, 2.0),
                        Eigen::MatrixXd::Constant(2, 2, std::numbers::pi)};
  EXPECT_NEAR((hm::reconstruct(neg).array() + 2.0).abs().maxCoeff(), 0.0, 1e-15);
}

TEST(Reconstruct, ShapeMismatch) {
  hm::Decomposition bad{Eigen::MatrixXd::Ones(2, 3), Eigen::MatrixXd::Zero(3, 2)};
  EXPECT_THROW(hm::reconstruct(bad), hm::ValidationError);
}

TEST(Decompose, SinglePrecisionRoundTrip) {
  std::mt19937_64 rng(9);
  const Eigen::MatrixXf x = oracle::random_image(rng, 16, 10).to_real().cast<float>();
  const auto dec = hm::decompose(x, hm::Axis::rows);
  EXPECT_LT((hm::reconstruct(dec) - x).cwiseAbs().maxCoeff(), 1e-3f);
}
