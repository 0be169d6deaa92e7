#include "hilbertmark/bench.hpp"

#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>

#include "hilbertmark/codec.hpp"

#ifndef HILBERTMARK_VERSION
#define HILBERTMARK_VERSION "dev"
#endif

namespace hilbertmark {

std::string_view tool_version() { return "hilbertmark " HILBERTMARK_VERSION; }

namespace {

BenchAttack row(std::string label, std::string_view spec) {
  return BenchAttack{std::move(label), parse_attack_spec(spec), {}};
}

BenchAttack out_of_scope(std::string label) {
  return BenchAttack{std::move(label), std::nullopt, "tool-specific, out of scope"};
}

std::uint64_t effective_seed(const AttackSpec& spec, std::uint64_t seed_base) {
  return spec.seed_explicit ? spec.seed : seed_base;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string markdown_cell(const std::string& text) {
  std::string out;
  for (const char c : text) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::optional<double> parse_metric(const std::string& text) {
  if (text == "skipped" || text.empty()) return std::nullopt;
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw ValidationError("bad numeric field '" + text + "'");
  return v;
}

}  // namespace

std::vector<BenchAttack> attack_preset(std::string_view name) {
  if (name != "table1") throw ValidationError("unknown attack preset '" + std::string(name) + "'");
  std::vector<BenchAttack> attacks{
      row("No attack", "none"),
      out_of_scope("Tune Sharpen (Directional)"),
      out_of_scope("Smoothing (50%)"),
      row("Lowpass Blur (Radius 1)", "lowpass_blur:radius=1"),
      row("Gaussian Noise", "gaussian_noise:mean=0,var=0.01"),
      row("Gaussian Blur (Radius 1)", "gaussian_blur:radius=1"),
      row("Gamma correction 1.09", "gamma:g=1.09"),
      row("Gamma correction 0.95", "gamma:g=0.95"),
      out_of_scope("Deinterlace (Even line, Interpolation)"),
      row("Contrast Enhancement 0.75", "contrast_enhance:c=0.75"),
      row("Contrast Enhancement 1.25", "contrast_enhance:c=1.25"),
      row("Dilation", "dilate:size=3"),
      row("Erosion", "erode:size=3"),
      out_of_scope("Local equalization (80 80)"),
      row("Rotation 1 degree (Bilinear)", "rotate:deg=1,interp=bilinear"),
      row("Additive Noise", "additive_uniform_noise:amplitude=10"),
      row("Cropping", "crop:fraction=0.25,anchor=center"),
      row("Median Filter (3x3)", "median_filter:size=3"),
      row("Intensity Adjustment", "intensity_adjust:lo=0.1,hi=1"),
      row("Uniform Rescaling (512-256-512)", "rescale_uniform:mid=256"),
      row("Non-uniform Rescaling (512-(320x240)-512)", "rescale_nonuniform:w=320,h=240"),
  };
  for (const int q : {20, 40, 60, 80}) {
    attacks.push_back(row("JPEG " + std::to_string(q) + "%", "jpeg:q=" + std::to_string(q)));
  }
  for (int ratio = 2; ratio <= 20; ratio += 2) {
    attacks.push_back(row("JPEG2000 (Compression ratio " + std::to_string(ratio) + ")",
                          "jpeg2000:ratio=" + std::to_string(ratio)));
  }
  return attacks;
}

std::vector<BenchAttack> parse_attack_list(std::string_view text) {
  if (text == "table1") return attack_preset(text);
  std::vector<BenchAttack> attacks;
  while (!text.empty()) {
    const auto semi = text.find(';');
    const std::string_view item = text.substr(0, semi);
    if (!item.empty()) {
      const AttackSpec spec = parse_attack_spec(item);
      attacks.push_back(BenchAttack{format_attack_spec(spec), spec, {}});
    }
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
  }
  if (attacks.empty()) throw ValidationError("attack list is empty");
  return attacks;
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "md" || text == "markdown") return ReportFormat::markdown;
  throw ValidationError("unknown report format '" + std::string(text) + "' (expected csv|md)");
}

BenchReport run_suite(const GrayImage& host, const GrayImage& watermark,
                      std::optional<double> lambda, const std::vector<BenchAttack>& attacks,
                      const BenchOptions& options) {
  if (!host.same_shape(watermark)) {
    throw ValidationError("host and watermark must have identical dimensions");
  }
  if (attacks.empty()) throw ValidationError("attack list is empty");

  BenchReport report;
  report.axis = options.axis;
  report.peak_mode = options.peak_mode;
  report.tool_version = std::string(tool_version());
  report.seed_base = options.seed_base;

  if (lambda) {
    report.lambda = *lambda;
  } else {
    const OptimizeResult opt =
        optimize_lambda(Objective(host, watermark, options.axis), options.optimizer);
    report.lambda = opt.lambda_star;
    report.optimizer_trace = opt.trace;
  }

  const EmbedResult embedded = embed(host, watermark, EmbedParams{report.lambda, options.axis, true});
  const RealField watermark_values = watermark.to_real();
  const GrayImage& marked_reference =
      options.marked_reference == MarkedReference::host ? host : embedded.marked;

  std::set<std::string> labels;
  for (const BenchAttack& attack : attacks) {
    BenchRow r;
    r.label = attack.label;
    for (int n = 2; labels.count(r.label); ++n) r.label = attack.label + " #" + std::to_string(n);
    labels.insert(r.label);
    r.spec = attack.spec;

    if (!attack.spec) {
      r.skipped = true;
      r.skip_reason = attack.skip_reason.empty() ? "not reproducible" : attack.skip_reason;
      report.rows.push_back(std::move(r));
      continue;
    }

    AttackSpec spec = *attack.spec;
    spec.seed = effective_seed(spec, options.seed_base);
    r.spec = spec;
    try {
      const GrayImage attacked = apply_attack(embedded.marked, spec, options.attack_context);
      const ExtractResult extracted = extract_values(attacked.to_real(), embedded.artifacts);
      r.marked_quality = psnr(marked_reference.pixels(), attacked.pixels(), options.peak_mode);
      r.extracted_quality = psnr(watermark_values, extracted.watermark_values, options.peak_mode);
    } catch (const UnsupportedAttackError& e) {
      r.skipped = true;
      r.skip_reason = e.what();
    }
    report.rows.push_back(std::move(r));
  }
  return report;
}

void write_report(std::ostream& out, const BenchReport& report, ReportFormat format) {
  const auto fields = [](const BenchRow& r) {
    std::vector<std::string> f;
    f.push_back(r.label);
    f.push_back(r.spec ? std::string(to_string(r.spec->kind)) : "");
    f.push_back(r.spec ? format_attack_params(*r.spec) : "");
    f.push_back(r.spec && r.spec->stochastic() ? std::to_string(r.spec->seed) : "");
    if (r.skipped) {
      f.insert(f.end(), 4, "skipped");
    } else {
      f.push_back(format_real(r.marked_quality.psnr_db));
      f.push_back(format_real(r.marked_quality.rmse));
      f.push_back(format_real(r.extracted_quality.psnr_db));
      f.push_back(format_real(r.extracted_quality.rmse));
    }
    return f;
  };

  if (format == ReportFormat::csv) {
    out << kReportCsvHeader << '\n';
    for (const BenchRow& r : report.rows) {
      const auto f = fields(r);
      for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << csv_field(f[i]);
      out << '\n';
    }
    return;
  }

  out << "<!-- " << report.tool_version << "; lambda=" << report.lambda
      << "; axis=" << to_string(report.axis) << "; peak=" << to_string(report.peak_mode)
      << "; seed_base=" << report.seed_base << " -->\n\n";
  out << "| label | kind | params | seed | psnr_marked_db | rmse_marked | psnr_extracted_db | "
         "rmse_extracted | note |\n";
  out << "|---|---|---|---|---:|---:|---:|---:|---|\n";
  for (const BenchRow& r : report.rows) {
    out << '|';
    for (const auto& f : fields(r)) out << ' ' << markdown_cell(f) << " |";
    out << ' ' << markdown_cell(r.skip_reason) << " |\n";
  }
}

std::string write_report(const BenchReport& report, ReportFormat format) {
  std::ostringstream out;
  write_report(out, report, format);
  return out.str();
}

std::vector<ParsedRow> parse_report_csv(std::string_view csv) {
  std::vector<ParsedRow> rows;
  std::size_t line_no = 0;
  while (!csv.empty()) {
    const auto nl = csv.find('\n');
    std::string_view line = csv.substr(0, nl);
    csv = nl == std::string_view::npos ? std::string_view{} : csv.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no++ == 0) {
      if (line != kReportCsvHeader) throw ValidationError("unexpected report header");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw ValidationError("report line " + std::to_string(line_no) + " has wrong field count");
    rows.push_back(ParsedRow{f[0], f[1], f[2], f[3], parse_metric(f[4]), parse_metric(f[5]),
                             parse_metric(f[6]), parse_metric(f[7])});
  }
  return rows;
}

}  // namespace hilbertmark
