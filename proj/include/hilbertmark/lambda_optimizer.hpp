#ifndef HILBERTMARK_LAMBDA_OPTIMIZER_HPP_
#define HILBERTMARK_LAMBDA_OPTIMIZER_HPP_

// Scaling-factor selection.
//
// The combined objective is the raw sum of squared errors of the embedding
// (marked vs host) and of the extraction (extracted vs watermark):
//
//   f(lambda) = sum (Zw - Z)^2 + sum (W~ - W)^2
//
// Each fixed-point step freezes the per-pixel extraction error term
//   alpha = acos(clamp(cos(Theta + l b) + eps / a)) - (Theta + l b)
// at the current l and minimizes the surrogate
//   f_l(lambda) = sum (a b sin Theta)^2 lambda^2 + (alpha cos Phi)^2 lambda^-2,
// whose minimizer is (sum (alpha cos Phi)^2 / sum (a b sin Theta)^2)^(1/4).

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "hilbertmark/codec.hpp"
#include "hilbertmark/hilbert.hpp"
#include "hilbertmark/types.hpp"

namespace hilbertmark {

struct OptimizerConfig {
  double lambda0 = 0.01;
  double epsilon = 0.5;  ///< truncation error, intensity units
  double tolerance = 1e-4;
  int max_iterations = 50;

  void validate() const;
};

struct OptimizerTrace {
  std::vector<double> lambdas;           ///< lambda_0, lambda_1, ...
  std::vector<double> objective_values;  ///< f(lambda_l) for each entry of `lambdas`
  bool converged = false;
  int iterations = 0;
};

struct OptimizeResult {
  double lambda_star = 0.0;
  OptimizerTrace trace;
};

/// Split of f(lambda) into its embedding and extraction sums.
struct ObjectiveTerms {
  double embed_sse = 0.0;
  double extract_sse = 0.0;
  std::size_t pixels = 0;

  double total() const { return embed_sse + extract_sse; }
  double rmse_marked() const;
  double rmse_extracted() const;
};

/// f(lambda) with the host/watermark decompositions computed once.
/// Uses quantized embedding and float-precision extraction.
class Objective {
 public:
  Objective(const GrayImage& host, const GrayImage& watermark, Axis axis = Axis::columns);

  double operator()(double lambda) const { return terms(lambda).total(); }
  ObjectiveTerms terms(double lambda) const;

  const Decomposition& host_decomposition() const { return host_dec_; }
  const Decomposition& watermark_decomposition() const { return wm_dec_; }
  const RealField& host() const { return host_; }
  const RealField& watermark() const { return watermark_; }
  Axis axis() const { return axis_; }

 private:
  RealField host_;
  RealField watermark_;
  Decomposition host_dec_;
  Decomposition wm_dec_;
  Axis axis_;
};

double objective_f(const GrayImage& host, const GrayImage& watermark, double lambda,
                   Axis axis = Axis::columns);

struct AlphaField {
  RealField alpha;
  Eigen::Index floored_pixels = 0;
};

/// Per-pixel extraction-error term; pixels with host amplitude below
/// kAmplitudeFloor get alpha = 0 and are counted.
AlphaField alpha_field(const Decomposition& host_dec, const Decomposition& wm_dec, double lambda,
                       double epsilon);

/// Numerator and denominator of the fixed-point update.
struct IterationSums {
  double numerator = 0.0;    ///< sum (alpha cos Phi)^2
  double denominator = 0.0;  ///< sum (a b sin Theta)^2
};

IterationSums iteration_sums(const Decomposition& host_dec, const Decomposition& wm_dec,
                             double lambda_l, double epsilon);

/// One fixed-point step. Throws DegenerateInputError when either sum is zero.
double iterate_lambda(const Decomposition& host_dec, const Decomposition& wm_dec, double lambda_l,
                      double epsilon);

/// Iterates `iterate_lambda` from config.lambda0 until the relative step is
/// below config.tolerance or config.max_iterations steps were taken.
OptimizeResult optimize_lambda(const Objective& objective, const OptimizerConfig& config);
OptimizeResult optimize_lambda(const GrayImage& host, const GrayImage& watermark,
                               const OptimizerConfig& config, Axis axis = Axis::columns);

/// RMS of the rounding residual of the quantized embedding at `lambda`.
double measured_truncation_epsilon(const Objective& objective, double lambda);

struct GridScan {
  double best_lambda = 0.0;
  double best_value = 0.0;
  std::vector<double> lambdas;
  std::vector<double> values;
};

/// Evaluates `objective` at every grid point. Ties go to the smallest lambda.
GridScan grid_scan_oracle(std::span<const double> grid,
                          const std::function<double(double)>& objective);
GridScan grid_scan_oracle(const GrayImage& host, const GrayImage& watermark,
                          std::span<const double> grid, Axis axis = Axis::columns);

/// `count` log-spaced points from `lo` to `hi` inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// CSV with header `lambda,f_lambda`.
void write_objective_csv(std::ostream& out, const GridScan& scan);

/// CSV with header `lambda,rmse_marked,rmse_extracted,rmse_combined`.
void write_rmse_curve_csv(std::ostream& out, const Objective& objective,
                          std::span<const double> grid);

}  // namespace hilbertmark

#endif  // HILBERTMARK_LAMBDA_OPTIMIZER_HPP_
