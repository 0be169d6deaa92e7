#include "hilbertmark/lambda_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace hilbertmark {

void OptimizerConfig::validate() const {
  if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) throw ValidationError("lambda0 must be > 0");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon must be >= 0");
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be > 0");
  if (max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
}

double ObjectiveTerms::rmse_marked() const {
  return std::sqrt(embed_sse / static_cast<double>(pixels));
}

double ObjectiveTerms::rmse_extracted() const {
  return std::sqrt(extract_sse / static_cast<double>(pixels));
}

Objective::Objective(const GrayImage& host, const GrayImage& watermark, Axis axis)
    : host_(host.to_real()), watermark_(watermark.to_real()), axis_(axis) {
  if (!host.same_shape(watermark)) {
    throw ValidationError("host and watermark must have identical dimensions");
  }
  host_dec_ = decompose(host_, axis);
  wm_dec_ = decompose(watermark_, axis);
}

ObjectiveTerms Objective::terms(double lambda) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("objective requires lambda > 0");
  }
  const EmbedArtifacts artifacts{host_dec_, wm_dec_, EmbedParams{lambda, axis_, true}};
  const RealField marked = quantize(embed_values(artifacts)).to_real();
  const ExtractResult extracted = extract_values(marked, artifacts);

  ObjectiveTerms t;
  t.embed_sse = (marked - host_).squaredNorm();
  t.extract_sse = (extracted.watermark_values - watermark_).squaredNorm();
  t.pixels = static_cast<std::size_t>(host_.size());
  return t;
}

double objective_f(const GrayImage& host, const GrayImage& watermark, double lambda, Axis axis) {
  return Objective(host, watermark, axis)(lambda);
}

namespace {

void check_pair(const Decomposition& host_dec, const Decomposition& wm_dec) {
  require_same_shape(host_dec.amplitude, wm_dec.amplitude, "decomposition pair");
  require_same_shape(host_dec.amplitude, host_dec.phase, "host decomposition");
  require_same_shape(wm_dec.amplitude, wm_dec.phase, "watermark decomposition");
  if (host_dec.axis != wm_dec.axis) throw ValidationError("decompositions use different axes");
}

}  // namespace

AlphaField alpha_field(const Decomposition& host_dec, const Decomposition& wm_dec, double lambda,
                       double epsilon) {
  check_pair(host_dec, wm_dec);
  AlphaField out{RealField(host_dec.rows(), host_dec.cols()), 0};
  for (Eigen::Index c = 0; c < host_dec.cols(); ++c) {
    for (Eigen::Index r = 0; r < host_dec.rows(); ++r) {
      const double a = host_dec.amplitude(r, c);
      if (std::abs(a) < kAmplitudeFloor) {
        out.alpha(r, c) = 0.0;
        ++out.floored_pixels;
        continue;
      }
      const double theta = host_dec.phase(r, c) + lambda * wm_dec.amplitude(r, c);
      out.alpha(r, c) = std::acos(std::clamp(std::cos(theta) + epsilon / a, -1.0, 1.0)) - theta;
    }
  }
  return out;
}

IterationSums iteration_sums(const Decomposition& host_dec, const Decomposition& wm_dec,
                             double lambda_l, double epsilon) {
  const AlphaField alpha = alpha_field(host_dec, wm_dec, lambda_l, epsilon);
  IterationSums s;
  s.numerator = (alpha.alpha.array() * wm_dec.phase.array().cos()).square().sum();
  s.denominator = (host_dec.amplitude.array() * wm_dec.amplitude.array() *
                   host_dec.phase.array().sin())
                      .square()
                      .sum();
  return s;
}

double iterate_lambda(const Decomposition& host_dec, const Decomposition& wm_dec, double lambda_l,
                      double epsilon) {
  if (!(lambda_l > 0.0)) throw ValidationError("iterate_lambda requires lambda > 0");
  const IterationSums s = iteration_sums(host_dec, wm_dec, lambda_l, epsilon);
  if (s.denominator == 0.0) {
    throw DegenerateInputError(
        "sum (a b sin Theta)^2 is zero: watermark amplitude or host phase vanishes everywhere, "
        "so embedding costs nothing and no trade-off exists");
  }
  if (s.numerator == 0.0) {
    throw DegenerateInputError(
        "sum (alpha cos Phi)^2 is zero: extraction is error-free at this lambda, so the "
        "update collapses to lambda = 0");
  }
  return std::pow(s.numerator / s.denominator, 0.25);
}

OptimizeResult optimize_lambda(const Objective& objective, const OptimizerConfig& config) {
  config.validate();
  OptimizeResult result;
  auto& trace = result.trace;
  double current = config.lambda0;
  trace.lambdas.push_back(current);
  trace.objective_values.push_back(objective(current));

  while (trace.iterations < config.max_iterations) {
    const double next = iterate_lambda(objective.host_decomposition(),
                                       objective.watermark_decomposition(), current,
                                       config.epsilon);
    ++trace.iterations;
    trace.lambdas.push_back(next);
    trace.objective_values.push_back(objective(next));
    const double step = std::abs(next - current) / current;
    current = next;
    if (step < config.tolerance) {
      trace.converged = true;
      break;
    }
  }
  result.lambda_star = current;
  return result;
}

OptimizeResult optimize_lambda(const GrayImage& host, const GrayImage& watermark,
                               const OptimizerConfig& config, Axis axis) {
  config.validate();
  return optimize_lambda(Objective(host, watermark, axis), config);
}

double measured_truncation_epsilon(const Objective& objective, double lambda) {
  const EmbedArtifacts artifacts{objective.host_decomposition(),
                                 objective.watermark_decomposition(),
                                 EmbedParams{lambda, objective.axis(), true}};
  const RealField values = embed_values(artifacts);
  const RealField residual = quantize(values).to_real() - values;
  return std::sqrt(residual.squaredNorm() / static_cast<double>(residual.size()));
}

GridScan grid_scan_oracle(std::span<const double> grid,
                          const std::function<double(double)>& objective) {
  if (grid.empty()) throw ValidationError("grid scan needs at least one point");
  GridScan scan;
  scan.lambdas.assign(grid.begin(), grid.end());
  scan.values.reserve(grid.size());
  bool first = true;
  for (const double lambda : grid) {
    if (!(lambda > 0.0)) throw ValidationError("grid points must be > 0");
    const double v = objective(lambda);
    scan.values.push_back(v);
    if (first || v < scan.best_value || (v == scan.best_value && lambda < scan.best_lambda)) {
      scan.best_lambda = lambda;
      scan.best_value = v;
      first = false;
    }
  }
  return scan;
}

GridScan grid_scan_oracle(const GrayImage& host, const GrayImage& watermark,
                          std::span<const double> grid, Axis axis) {
  const Objective objective(host, watermark, axis);
  return grid_scan_oracle(grid, [&objective](double l) { return objective(l); });
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw ValidationError("log_grid needs 0 < lo <= hi and count >= 1");
  }
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = (std::log10(hi) - std::log10(lo)) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = std::pow(10.0, std::log10(lo) + step * static_cast<double>(i));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

void write_objective_csv(std::ostream& out, const GridScan& scan) {
  out << "lambda,f_lambda\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < scan.lambdas.size(); ++i) {
    out << scan.lambdas[i] << ',' << scan.values[i] << '\n';
  }
}

void write_rmse_curve_csv(std::ostream& out, const Objective& objective,
                          std::span<const double> grid) {
  out << "lambda,rmse_marked,rmse_extracted,rmse_combined\n";
  out << std::setprecision(17);
  for (const double lambda : grid) {
    const ObjectiveTerms t = objective.terms(lambda);
    out << lambda << ',' << t.rmse_marked() << ',' << t.rmse_extracted() << ','
        << std::sqrt(t.total() / static_cast<double>(t.pixels)) << '\n';
  }
}

}  // namespace hilbertmark
