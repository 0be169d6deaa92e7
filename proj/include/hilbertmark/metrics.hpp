#ifndef HILBERTMARK_METRICS_HPP_
#define HILBERTMARK_METRICS_HPP_

#include <cmath>
#include <limits>
#include <string_view>

#include <Eigen/Dense>

#include "hilbertmark/types.hpp"

namespace hilbertmark {

/// Which value plays "max z" in the PSNR numerator.
enum class PeakMode {
  reference_max,   ///< largest value of the reference matrix
  full_scale_255,  ///< fixed 8-bit full scale
};

std::string_view to_string(PeakMode mode);
PeakMode parse_peak_mode(std::string_view text);

struct QualityReport {
  double rmse = 0.0;
  double psnr_db = std::numeric_limits<double>::infinity();
  double peak_used = 255.0;
};

/// sqrt(mean((a - b)^2)) accumulated in double.
template <typename A, typename B>
double rmse(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  require_same_shape(a, b, "rmse");
  const auto diff = a.template cast<double>() - b.template cast<double>();
  return std::sqrt(diff.squaredNorm() / static_cast<double>(a.size()));
}

inline double rmse(const GrayImage& a, const GrayImage& b) {
  return rmse(a.pixels(), b.pixels());
}

/// 10 log10(peak^2 / rmse^2); +inf when the inputs are identical.
template <typename A, typename B>
QualityReport psnr(const Eigen::MatrixBase<A>& reference, const Eigen::MatrixBase<B>& test,
                   PeakMode peak_mode = PeakMode::reference_max) {
  QualityReport report;
  report.rmse = rmse(reference, test);
  report.peak_used = peak_mode == PeakMode::full_scale_255
                         ? 255.0
                         : static_cast<double>(reference.template cast<double>().maxCoeff());
  if (report.rmse == 0.0) {
    report.psnr_db = std::numeric_limits<double>::infinity();
  } else {
    report.psnr_db = 10.0 * std::log10(report.peak_used * report.peak_used /
                                       (report.rmse * report.rmse));
  }
  return report;
}

inline QualityReport psnr(const GrayImage& reference, const GrayImage& test,
                          PeakMode peak_mode = PeakMode::reference_max) {
  return psnr(reference.pixels(), test.pixels(), peak_mode);
}

/// Per-pixel |a - b|.
GrayImage image_diff(const GrayImage& a, const GrayImage& b);

/// Pearson correlation of two equally shaped matrices; 0 when either is constant.
template <typename A, typename B>
double pearson_correlation(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  require_same_shape(a, b, "pearson_correlation");
  const Eigen::ArrayXXd x = a.template cast<double>().array() - a.template cast<double>().mean();
  const Eigen::ArrayXXd y = b.template cast<double>().array() - b.template cast<double>().mean();
  const double sxx = (x * x).sum();
  const double syy = (y * y).sum();
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return (x * y).sum() / std::sqrt(sxx * syy);
}

}  // namespace hilbertmark

#endif  // HILBERTMARK_METRICS_HPP_
