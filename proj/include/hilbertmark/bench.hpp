#ifndef HILBERTMARK_BENCH_HPP_
#define HILBERTMARK_BENCH_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hilbertmark/attacks.hpp"
#include "hilbertmark/lambda_optimizer.hpp"
#include "hilbertmark/metrics.hpp"
#include "hilbertmark/types.hpp"

namespace hilbertmark {

/// One entry of an attack list: the attack to run, or a placeholder for a
/// row that cannot be reproduced (kept so the table keeps its shape).
struct BenchAttack {
  std::string label;
  std::optional<AttackSpec> spec;  ///< empty => always skipped
  std::string skip_reason;
};

/// Attacked image compared against the pristine host or the unattacked marked image.
enum class MarkedReference { host, marked };

struct BenchOptions {
  PeakMode peak_mode = PeakMode::reference_max;
  Axis axis = Axis::columns;
  MarkedReference marked_reference = MarkedReference::host;
  std::uint64_t seed_base = 0;  ///< seed for stochastic attacks without an explicit @seed
  OptimizerConfig optimizer;    ///< used when lambda is "auto"
  AttackContext attack_context;
};

struct BenchRow {
  std::string label;
  std::optional<AttackSpec> spec;
  bool skipped = false;
  std::string skip_reason;
  QualityReport marked_quality;
  QualityReport extracted_quality;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double lambda = 0.0;
  Axis axis = Axis::columns;
  PeakMode peak_mode = PeakMode::reference_max;
  std::string tool_version;
  std::uint64_t seed_base = 0;
  std::optional<OptimizerTrace> optimizer_trace;  ///< set when lambda was "auto"
};

/// Embeds once, then attack -> extract -> measure for every entry, in order.
/// `lambda` empty means "auto" (resolved with optimize_lambda).
BenchReport run_suite(const GrayImage& host, const GrayImage& watermark,
                      std::optional<double> lambda, const std::vector<BenchAttack>& attacks,
                      const BenchOptions& options = {});

/// Named attack presets; currently `table1`.
std::vector<BenchAttack> attack_preset(std::string_view name);

/// Attack list from a preset name or a ';'-separated list of attack specs.
std::vector<BenchAttack> parse_attack_list(std::string_view text);

enum class ReportFormat { csv, markdown };
ReportFormat parse_report_format(std::string_view text);

inline constexpr std::string_view kReportCsvHeader =
    "label,kind,params,seed,psnr_marked_db,rmse_marked,psnr_extracted_db,rmse_extracted";

void write_report(std::ostream& out, const BenchReport& report, ReportFormat format);
std::string write_report(const BenchReport& report, ReportFormat format);

/// One parsed CSV line. Skipped rows carry no metrics.
struct ParsedRow {
  std::string label;
  std::string kind;
  std::string params;
  std::string seed;
  std::optional<double> psnr_marked_db;
  std::optional<double> rmse_marked;
  std::optional<double> psnr_extracted_db;
  std::optional<double> rmse_extracted;
};

std::vector<ParsedRow> parse_report_csv(std::string_view csv);

std::string_view tool_version();

}  // namespace hilbertmark

#endif  // HILBERTMARK_BENCH_HPP_
