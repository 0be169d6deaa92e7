#include "hilbertmark/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hilbertmark/attacks.hpp"
#include "hilbertmark/bench.hpp"
#include "hilbertmark/codec.hpp"
#include "hilbertmark/image_io.hpp"
#include "hilbertmark/lambda_optimizer.hpp"
#include "hilbertmark/metrics.hpp"

namespace hilbertmark {

namespace {

constexpr const char* kJp2EnvVar = "HILBERTMARK_JP2_CMD";

/// Converts library validation failures raised while interpreting flags into usage errors.
template <typename Fn>
auto interpret(Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
}

std::string number(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

AttackContext load_attack_context(const std::string& config_path) {
  AttackContext ctx;
  if (const char* env = std::getenv(kJp2EnvVar)) ctx.jp2_cmd = env;
  if (config_path.empty()) return ctx;

  std::ifstream in(config_path);
  if (!in) throw UsageError("cannot read config file " + config_path);
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + config_path + ": " + e.what());
  }
  if (cfg.contains("jp2_cmd")) {
    if (!cfg["jp2_cmd"].is_string()) throw UsageError("config entry jp2_cmd must be a string");
    ctx.jp2_cmd = cfg["jp2_cmd"].get<std::string>();
  }
  return ctx;
}

struct Flags {
  std::string host, watermark, marked, input, output, reference, test, a, b;
  std::string axis = "columns";
  std::string peak = "reference_max";
  std::string lambda_text;
  double lambda = 0.0;
  std::string attack;
  std::string attacks = "table1";
  std::string report;
  std::string report_format = "csv";
  std::string marked_ref = "host";
  std::string config;
  std::string eps = "0.5";
  std::uint64_t seed = 0;
  double lambda0 = 0.01;
  double tolerance = 1e-4;
  int max_iterations = 50;
  std::string curve, rmse_curve;
  int grid_points = 200;
  double grid_min = 1e-5;
  double grid_max = 1e-1;
  bool no_quantize = false;
};

OptimizerConfig optimizer_config(const Flags& f, const Objective* objective) {
  OptimizerConfig cfg;
  cfg.lambda0 = f.lambda0;
  cfg.tolerance = f.tolerance;
  cfg.max_iterations = f.max_iterations;
  if (f.eps == "measured") {
    if (objective == nullptr) throw UsageError("--eps measured needs host and watermark");
    cfg.epsilon = measured_truncation_epsilon(*objective, f.lambda0);
  } else {
    try {
      std::size_t used = 0;
      cfg.epsilon = std::stod(f.eps, &used);
      if (used != f.eps.size()) throw std::invalid_argument(f.eps);
    } catch (const std::exception&) {
      throw UsageError("--eps expects a number or 'measured'");
    }
  }
  interpret([&] {
    cfg.validate();
    return 0;
  });
  return cfg;
}

int cmd_embed(const Flags& f, std::ostream& out) {
  const Axis axis = interpret([&] { return parse_axis(f.axis); });
  const GrayImage host = load_image(f.host);
  const GrayImage watermark = load_image(f.watermark);
  const EmbedResult res = embed(host, watermark, EmbedParams{f.lambda, axis, true});
  save_image(res.marked, f.output);
  const QualityReport q = psnr(host, res.marked, PeakMode::reference_max);
  out << "lambda=" << number(f.lambda) << " rmse=" << number(q.rmse) << " psnr=" << number(q.psnr_db)
      << '\n';
  return kExitOk;
}

int cmd_extract(const Flags& f, std::ostream& out) {
  const Axis axis = interpret([&] { return parse_axis(f.axis); });
  if (!(f.lambda > 0.0)) throw UsageError("--lambda must be > 0 for extraction");
  const GrayImage host = load_image(f.host);
  const GrayImage watermark = load_image(f.watermark);
  const GrayImage marked = load_image(f.marked);
  const ExtractResult res = extract(marked, host, watermark, EmbedParams{f.lambda, axis, true});
  save_image(res.watermark, f.output);
  const QualityReport q = psnr(watermark.to_real(), res.watermark_values, PeakMode::reference_max);
  out << "lambda=" << number(f.lambda) << " rmse=" << number(q.rmse) << " psnr=" << number(q.psnr_db)
      << " floored_pixels=" << res.floored_pixels << '\n';
  return kExitOk;
}

int cmd_optimize(const Flags& f, std::ostream& out) {
  const Axis axis = interpret([&] { return parse_axis(f.axis); });
  const GrayImage host = load_image(f.host);
  const GrayImage watermark = load_image(f.watermark);
  const Objective objective(host, watermark, axis);
  const OptimizerConfig cfg = optimizer_config(f, &objective);
  const OptimizeResult res = optimize_lambda(objective, cfg);

  out << "epsilon=" << number(cfg.epsilon) << '\n';
  for (std::size_t i = 0; i < res.trace.lambdas.size(); ++i) {
    out << "step " << i << " lambda=" << number(res.trace.lambdas[i])
        << " f=" << number(res.trace.objective_values[i]) << '\n';
  }
  out << "lambda_star=" << number(res.lambda_star)
      << " converged=" << (res.trace.converged ? "true" : "false")
      << " iterations=" << res.trace.iterations << '\n';

  if (!f.curve.empty() || !f.rmse_curve.empty()) {
    const auto grid = interpret([&] {
      return log_grid(f.grid_min, f.grid_max, static_cast<std::size_t>(std::max(f.grid_points, 0)));
    });
    if (!f.curve.empty()) {
      std::ofstream csv(f.curve);
      if (!csv) throw ImageIoError(ImageErrorCategory::io, "cannot write " + f.curve);
      const GridScan scan = grid_scan_oracle(grid, [&objective](double l) { return objective(l); });
      write_objective_csv(csv, scan);
      out << "grid_best_lambda=" << number(scan.best_lambda) << '\n';
    }
    if (!f.rmse_curve.empty()) {
      std::ofstream csv(f.rmse_curve);
      if (!csv) throw ImageIoError(ImageErrorCategory::io, "cannot write " + f.rmse_curve);
      write_rmse_curve_csv(csv, objective, grid);
    }
  }
  return kExitOk;
}

int cmd_attack(const Flags& f, std::ostream& out) {
  AttackSpec spec = interpret([&] { return parse_attack_spec(f.attack); });
  if (!spec.seed_explicit) spec.seed = f.seed;
  const AttackContext ctx = load_attack_context(f.config);
  const GrayImage image = load_image(f.input);
  const GrayImage attacked = apply_attack(image, spec, ctx);
  save_image(attacked, f.output);
  out << "attack=" << format_attack_spec(spec) << " seed=" << spec.seed << '\n';
  return kExitOk;
}

int cmd_metrics(const Flags& f, std::ostream& out) {
  const PeakMode peak = interpret([&] { return parse_peak_mode(f.peak); });
  const GrayImage ref = load_image(f.reference);
  const GrayImage test = load_image(f.test);
  const QualityReport q = psnr(ref, test, peak);
  out << "rmse=" << number(q.rmse) << " psnr=" << number(q.psnr_db)
      << " peak=" << number(q.peak_used) << '\n';
  return kExitOk;
}

int cmd_diff(const Flags& f, std::ostream& out) {
  const GrayImage a = load_image(f.a);
  const GrayImage b = load_image(f.b);
  const GrayImage d = image_diff(a, b);
  save_image(d, f.output);
  out << "max_diff=" << static_cast<int>(d.pixels().maxCoeff()) << '\n';
  return kExitOk;
}

int cmd_bench(const Flags& f, std::ostream& out) {
  BenchOptions opts;
  opts.axis = interpret([&] { return parse_axis(f.axis); });
  opts.peak_mode = interpret([&] { return parse_peak_mode(f.peak); });
  opts.seed_base = f.seed;
  if (f.marked_ref == "host") {
    opts.marked_reference = MarkedReference::host;
  } else if (f.marked_ref == "marked") {
    opts.marked_reference = MarkedReference::marked;
  } else {
    throw UsageError("--marked-ref expects host|marked");
  }
  const ReportFormat format = interpret([&] { return parse_report_format(f.report_format); });
  const auto attacks = interpret([&] { return parse_attack_list(f.attacks); });

  std::optional<double> lambda;
  if (f.lambda_text != "auto") {
    try {
      std::size_t used = 0;
      lambda = std::stod(f.lambda_text, &used);
      if (used != f.lambda_text.size() || !(*lambda > 0.0)) throw std::invalid_argument(f.lambda_text);
    } catch (const std::exception&) {
      throw UsageError("--lambda expects a positive number or 'auto'");
    }
  }
  opts.attack_context = load_attack_context(f.config);

  const GrayImage host = load_image(f.host);
  const GrayImage watermark = load_image(f.watermark);
  if (!lambda) {
    const Objective objective(host, watermark, opts.axis);
    opts.optimizer = optimizer_config(f, &objective);
  }
  const BenchReport report = run_suite(host, watermark, lambda, attacks, opts);
  const std::string text = write_report(report, format);

  if (f.report.empty()) {
    out << text;
  } else {
    write_file(f.report, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    out << "lambda=" << number(report.lambda) << " rows=" << report.rows.size() << " report=" << f.report
        << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Hilbert-transform phase watermarking for 8-bit grayscale images", "hilbertmark"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  const auto add_axis = [&f](CLI::App* cmd) {
    cmd->add_option("--axis", f.axis, "Transform axis: columns|rows")->capture_default_str();
  };
  const auto add_optimizer = [&f](CLI::App* cmd) {
    cmd->add_option("--lambda0", f.lambda0, "Initial scaling factor")->capture_default_str();
    cmd->add_option("--eps", f.eps, "Truncation error (number or 'measured')")->capture_default_str();
    cmd->add_option("--tol", f.tolerance, "Relative step tolerance")->capture_default_str();
    cmd->add_option("--max-iter", f.max_iterations, "Iteration cap")->capture_default_str();
  };

  auto* embed_cmd = app.add_subcommand("embed", "Embed a watermark into a host image");
  embed_cmd->add_option("--host", f.host)->required();
  embed_cmd->add_option("--watermark", f.watermark)->required();
  embed_cmd->add_option("--lambda", f.lambda, "Scaling factor (>= 0)")->required();
  embed_cmd->add_option("--out", f.output)->required();
  add_axis(embed_cmd);

  auto* extract_cmd = app.add_subcommand("extract", "Extract a watermark (non-blind)");
  extract_cmd->add_option("--host", f.host)->required();
  extract_cmd->add_option("--watermark", f.watermark)->required();
  extract_cmd->add_option("--marked", f.marked)->required();
  extract_cmd->add_option("--lambda", f.lambda, "Scaling factor used at embedding")->required();
  extract_cmd->add_option("--out", f.output)->required();
  add_axis(extract_cmd);

  auto* opt_cmd = app.add_subcommand("optimize-lambda", "Fixed-point search for the scaling factor");
  opt_cmd->add_option("--host", f.host)->required();
  opt_cmd->add_option("--watermark", f.watermark)->required();
  opt_cmd->add_option("--curve", f.curve, "Write lambda,f_lambda CSV over a log grid");
  opt_cmd->add_option("--rmse-curve", f.rmse_curve, "Write per-lambda RMSE CSV over the same grid");
  opt_cmd->add_option("--grid-points", f.grid_points)->capture_default_str();
  opt_cmd->add_option("--grid-min", f.grid_min)->capture_default_str();
  opt_cmd->add_option("--grid-max", f.grid_max)->capture_default_str();
  add_axis(opt_cmd);
  add_optimizer(opt_cmd);

  auto* attack_cmd = app.add_subcommand("attack", "Apply one attack to an image");
  attack_cmd->add_option("--in", f.input)->required();
  attack_cmd->add_option("--attack", f.attack, "kind[:key=value,...][@seed]")->required();
  attack_cmd->add_option("--out", f.output)->required();
  attack_cmd->add_option("--seed", f.seed, "Seed when the attack text has none")->capture_default_str();
  attack_cmd->add_option("--config", f.config, "JSON config (jp2_cmd)");

  auto* metrics_cmd = app.add_subcommand("metrics", "RMSE and PSNR between two images");
  metrics_cmd->add_option("--ref", f.reference)->required();
  metrics_cmd->add_option("--test", f.test)->required();
  metrics_cmd->add_option("--peak", f.peak, "reference_max|255")->capture_default_str();

  auto* diff_cmd = app.add_subcommand("diff", "Absolute difference image");
  diff_cmd->add_option("--a", f.a)->required();
  diff_cmd->add_option("--b", f.b)->required();
  diff_cmd->add_option("--out", f.output)->required();

  auto* bench_cmd = app.add_subcommand("bench", "Embed, attack, extract and report quality");
  bench_cmd->add_option("--host", f.host)->required();
  bench_cmd->add_option("--watermark", f.watermark)->required();
  bench_cmd->add_option("--lambda", f.lambda_text, "Scaling factor or 'auto'")->required();
  bench_cmd->add_option("--attacks", f.attacks, "Preset name or ';'-separated attack list")
      ->capture_default_str();
  bench_cmd->add_option("--report", f.report, "Output path (stdout when omitted)");
  bench_cmd->add_option("--report-format", f.report_format, "csv|md")->capture_default_str();
  bench_cmd->add_option("--peak", f.peak, "reference_max|255")->capture_default_str();
  bench_cmd->add_option("--seed", f.seed, "Seed for stochastic attacks")->capture_default_str();
  bench_cmd->add_option("--marked-ref", f.marked_ref, "host|marked")->capture_default_str();
  bench_cmd->add_option("--config", f.config, "JSON config (jp2_cmd)");
  add_axis(bench_cmd);
  add_optimizer(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  try {
    if (*embed_cmd) return cmd_embed(f, out);
    if (*extract_cmd) return cmd_extract(f, out);
    if (*opt_cmd) return cmd_optimize(f, out);
    if (*attack_cmd) return cmd_attack(f, out);
    if (*metrics_cmd) return cmd_metrics(f, out);
    if (*diff_cmd) return cmd_diff(f, out);
    if (*bench_cmd) return cmd_bench(f, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const ImageIoError& e) {
    err << "image error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const DegenerateInputError& e) {
    err << "degenerate input: " << e.what() << '\n';
    return kExitDataError;
  } catch (const UnsupportedAttackError& e) {
    err << "unsupported attack: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitUsageError;
}

}  // namespace hilbertmark
