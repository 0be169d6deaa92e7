#include "hilbertmark/attacks.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <optional>
#include <random>
#include <unistd.h>

#include "hilbertmark/image_io.hpp"

namespace hilbertmark {

namespace {

// ---------------------------------------------------------------------------
// Parameter schema

struct NumericRule {
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();
  bool min_inclusive = true;
  bool max_inclusive = true;
  bool integer = false;
  bool odd = false;
};

struct ParamDef {
  std::string key;
  std::string default_value;
  std::vector<std::string> aliases;
  std::optional<NumericRule> numeric;  // empty => choice
  std::vector<std::string> choices;
};

struct KindDef {
  AttackKind kind;
  std::string_view name;
  std::vector<ParamDef> params;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

ParamDef num(std::string key, std::string def, NumericRule rule, std::vector<std::string> aliases = {}) {
  return ParamDef{std::move(key), std::move(def), std::move(aliases), rule, {}};
}

ParamDef choice(std::string key, std::string def, std::vector<std::string> choices,
                std::vector<std::string> aliases = {}) {
  return ParamDef{std::move(key), std::move(def), std::move(aliases), std::nullopt, std::move(choices)};
}

const std::vector<KindDef>& kind_table() {
  static const std::vector<KindDef> table = [] {
    const NumericRule non_negative{0.0, kInf};
    const NumericRule positive{0.0, kInf, false};
    const NumericRule unit{0.0, 1.0};
    const NumericRule window{3.0, 99.0, true, true, true, true};
    const NumericRule pixels{1.0, 65536.0, true, true, true};
    return std::vector<KindDef>{
        {AttackKind::none, "none", {}},
        {AttackKind::additive_uniform_noise,
         "additive_uniform_noise",
         {num("amplitude", "10", non_negative, {"amp"})}},
        {AttackKind::gaussian_noise,
         "gaussian_noise",
         {num("mean", "0", NumericRule{-1.0, 1.0}), num("var", "0.01", non_negative, {"variance"})}},
        {AttackKind::crop,
         "crop",
         {num("fraction", "0.25", NumericRule{0.0, 1.0, true, false}),
          choice("anchor", "center",
                 {"center", "top_left", "top_right", "bottom_left", "bottom_right"})}},
        {AttackKind::jpeg, "jpeg", {num("q", "75", NumericRule{1.0, 100.0, true, true, true}, {"quality"})}},
        {AttackKind::jpeg2000, "jpeg2000", {num("ratio", "2", NumericRule{1.0, kInf})}},
        {AttackKind::median_filter, "median_filter", {num("size", "3", window)}},
        {AttackKind::rotate,
         "rotate",
         {num("deg", "1", NumericRule{-360.0, 360.0}, {"degrees"}),
          choice("interp", "bilinear", {"bilinear", "nearest"}, {"interpolation"})}},
        {AttackKind::gamma, "gamma", {num("g", "1", positive, {"gamma"})}},
        {AttackKind::intensity_adjust, "intensity_adjust", {num("hi", "1", unit), num("lo", "0.1", unit)}},
        {AttackKind::gaussian_blur, "gaussian_blur", {num("radius", "1", NumericRule{0.0, 50.0, false})}},
        {AttackKind::lowpass_blur,
         "lowpass_blur",
         {num("radius", "1", NumericRule{1.0, 49.0, true, true, true})}},
        {AttackKind::contrast_enhance, "contrast_enhance", {num("c", "1", positive)}},
        {AttackKind::dilate, "dilate", {num("size", "3", window)}},
        {AttackKind::erode, "erode", {num("size", "3", window)}},
        {AttackKind::rescale_uniform, "rescale_uniform", {num("mid", "256", pixels)}},
        {AttackKind::rescale_nonuniform,
         "rescale_nonuniform",
         {num("h", "240", pixels), num("w", "320", pixels)}},
    };
  }();
  return table;
}

const KindDef& kind_def(AttackKind kind) {
  for (const auto& def : kind_table()) {
    if (def.kind == kind) return def;
  }
  throw ValidationError("unknown attack kind");
}

std::string canonical_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string validate_value(const ParamDef& def, std::string_view kind, std::string_view value) {
  const std::string where = std::string(kind) + "." + def.key + "=" + std::string(value);
  if (!def.numeric) {
    if (std::find(def.choices.begin(), def.choices.end(), value) == def.choices.end()) {
      throw AttackParseError("invalid value in '" + where + "'");
    }
    return std::string(value);
  }
  const auto v = parse_number(value);
  if (!v) throw AttackParseError("not a number in '" + where + "'");
  const NumericRule& rule = *def.numeric;
  const bool below = rule.min_inclusive ? *v < rule.min : *v <= rule.min;
  const bool above = rule.max_inclusive ? *v > rule.max : *v >= rule.max;
  if (below || above) throw AttackParseError("out of range in '" + where + "'");
  if (rule.integer && std::floor(*v) != *v) throw AttackParseError("integer required in '" + where + "'");
  if (rule.odd && std::fmod(*v, 2.0) == 0.0) throw AttackParseError("odd value required in '" + where + "'");
  return canonical_number(*v);
}

// ---------------------------------------------------------------------------
// Deterministic random numbers: mt19937_64's sequence is fixed by the
// standard; the conversions below avoid implementation-defined distributions.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Pixel operations

template <typename Fn>
GrayImage map_pixels(const GrayImage& image, Fn fn) {
  GrayImage out(image.height(), image.width());
  for (Eigen::Index c = 0; c < image.width(); ++c) {
    for (Eigen::Index r = 0; r < image.height(); ++r) out(r, c) = quantize_pixel(fn(image(r, c)));
  }
  return out;
}

std::uint8_t clamped_at(const GrayImage& image, Eigen::Index r, Eigen::Index c) {
  r = std::clamp<Eigen::Index>(r, 0, image.height() - 1);
  c = std::clamp<Eigen::Index>(c, 0, image.width() - 1);
  return image(r, c);
}

/// Rank filter over a size x size window with replicated borders.
/// rank 0 = min, size*size-1 = max, middle = median.
GrayImage rank_filter(const GrayImage& image, int size, int rank) {
  const int half = size / 2;
  GrayImage out(image.height(), image.width());
  std::vector<std::uint8_t> window(static_cast<std::size_t>(size * size));
  for (Eigen::Index r = 0; r < image.height(); ++r) {
    for (Eigen::Index c = 0; c < image.width(); ++c) {
      std::size_t k = 0;
      for (int dr = -half; dr <= half; ++dr) {
        for (int dc = -half; dc <= half; ++dc) window[k++] = clamped_at(image, r + dr, c + dc);
      }
      auto nth = window.begin() + rank;
      std::nth_element(window.begin(), nth, window.end());
      out(r, c) = *nth;
    }
  }
  return out;
}

/// Separable convolution with a symmetric kernel and replicated borders.
GrayImage separable_filter(const GrayImage& image, const std::vector<double>& kernel) {
  const auto half = static_cast<Eigen::Index>(kernel.size() / 2);
  const RealField src = image.to_real();
  RealField tmp(src.rows(), src.cols());
  for (Eigen::Index r = 0; r < src.rows(); ++r) {
    for (Eigen::Index c = 0; c < src.cols(); ++c) {
      double acc = 0.0;
      for (Eigen::Index k = -half; k <= half; ++k) {
        const Eigen::Index cc = std::clamp<Eigen::Index>(c + k, 0, src.cols() - 1);
        acc += kernel[static_cast<std::size_t>(k + half)] * src(r, cc);
      }
      tmp(r, c) = acc;
    }
  }
  RealField out(src.rows(), src.cols());
  for (Eigen::Index r = 0; r < src.rows(); ++r) {
    for (Eigen::Index c = 0; c < src.cols(); ++c) {
      double acc = 0.0;
      for (Eigen::Index k = -half; k <= half; ++k) {
        const Eigen::Index rr = std::clamp<Eigen::Index>(r + k, 0, src.rows() - 1);
        acc += kernel[static_cast<std::size_t>(k + half)] * tmp(rr, c);
      }
      out(r, c) = acc;
    }
  }
  return quantize(out);
}

/// Bilinear sample at (y, x); nullopt outside [0, h-1] x [0, w-1].
std::optional<double> bilinear(const GrayImage& image, double y, double x) {
  const double eps = 1e-9;
  if (y < -eps || x < -eps || y > static_cast<double>(image.height() - 1) + eps ||
      x > static_cast<double>(image.width() - 1) + eps) {
    return std::nullopt;
  }
  y = std::clamp(y, 0.0, static_cast<double>(image.height() - 1));
  x = std::clamp(x, 0.0, static_cast<double>(image.width() - 1));
  const auto r0 = static_cast<Eigen::Index>(std::floor(y));
  const auto c0 = static_cast<Eigen::Index>(std::floor(x));
  const Eigen::Index r1 = std::min(r0 + 1, image.height() - 1);
  const Eigen::Index c1 = std::min(c0 + 1, image.width() - 1);
  const double fy = y - static_cast<double>(r0);
  const double fx = x - static_cast<double>(c0);
  const double top = (1.0 - fx) * image(r0, c0) + fx * image(r0, c1);
  const double bottom = (1.0 - fx) * image(r1, c0) + fx * image(r1, c1);
  return (1.0 - fy) * top + fy * bottom;
}

/// Pixel-center aligned bilinear resize.
GrayImage resize_bilinear(const GrayImage& image, Eigen::Index height, Eigen::Index width) {
  if (height == image.height() && width == image.width()) return image;
  GrayImage out(height, width);
  const double sy = static_cast<double>(image.height()) / static_cast<double>(height);
  const double sx = static_cast<double>(image.width()) / static_cast<double>(width);
  for (Eigen::Index r = 0; r < height; ++r) {
    const double y = std::clamp((static_cast<double>(r) + 0.5) * sy - 0.5, 0.0,
                                static_cast<double>(image.height() - 1));
    for (Eigen::Index c = 0; c < width; ++c) {
      const double x = std::clamp((static_cast<double>(c) + 0.5) * sx - 0.5, 0.0,
                                  static_cast<double>(image.width() - 1));
      out(r, c) = quantize_pixel(*bilinear(image, y, x));
    }
  }
  return out;
}

GrayImage rescale_through(const GrayImage& image, Eigen::Index mid_height, Eigen::Index mid_width) {
  return resize_bilinear(resize_bilinear(image, mid_height, mid_width), image.height(),
                         image.width());
}

GrayImage rotate(const GrayImage& image, double degrees, bool nearest) {
  if (degrees == 0.0) return image;
  const double t = degrees * std::numbers::pi / 180.0;
  const double cs = std::cos(t);
  const double sn = std::sin(t);
  const double cy = static_cast<double>(image.height() - 1) / 2.0;
  const double cx = static_cast<double>(image.width() - 1) / 2.0;
  GrayImage out(image.height(), image.width());
  for (Eigen::Index r = 0; r < image.height(); ++r) {
    for (Eigen::Index c = 0; c < image.width(); ++c) {
      // Inverse map of an anti-clockwise turn on screen (rows grow downwards).
      const double dx = static_cast<double>(c) - cx;
      const double dy = static_cast<double>(r) - cy;
      double xs = cx + dx * cs - dy * sn;
      double ys = cy + dx * sn + dy * cs;
      if (nearest) {
        xs = std::round(xs);
        ys = std::round(ys);
      }
      const auto v = bilinear(image, ys, xs);
      out(r, c) = v ? quantize_pixel(*v) : 0;
    }
  }
  return out;
}

GrayImage crop(const GrayImage& image, double fraction, const std::string& anchor) {
  const double side = std::sqrt(fraction);
  const auto ch = static_cast<Eigen::Index>(std::round(static_cast<double>(image.height()) * side));
  const auto cw = static_cast<Eigen::Index>(std::round(static_cast<double>(image.width()) * side));
  Eigen::Index top = (image.height() - ch) / 2;
  Eigen::Index left = (image.width() - cw) / 2;
  if (anchor.starts_with("top")) top = 0;
  if (anchor.starts_with("bottom")) top = image.height() - ch;
  if (anchor.ends_with("left")) left = 0;
  if (anchor.ends_with("right")) left = image.width() - cw;
  GrayImage out = image;
  if (ch > 0 && cw > 0) out.pixels().block(top, left, ch, cw).setZero();
  return out;
}

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
  return text;
}

GrayImage jpeg2000_round_trip(const GrayImage& image, double ratio, const std::string& command) {
  if (command.empty()) {
    throw UnsupportedAttackError(
        "jpeg2000: no external encoder configured (set jp2_cmd in the config file or "
        "HILBERTMARK_JP2_CMD)");
  }
  std::string pattern = (std::filesystem::temp_directory_path() / "hilbertmark-jp2-XXXXXX").string();
  if (::mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("jpeg2000: mkdtemp failed");
  const std::filesystem::path dir(pattern);
  struct Cleanup {
    std::filesystem::path dir;
    ~Cleanup() {
      std::error_code ec;
      std::filesystem::remove_all(dir, ec);
    }
  } cleanup{dir};

  const auto in = dir / "in.pgm";
  const auto out = dir / "out.pgm";
  save_image(image, in, ImageFormat::pgm);
  std::string cmd = replace_all(command, "{in}", in.string());
  cmd = replace_all(cmd, "{out}", out.string());
  cmd = replace_all(cmd, "{tmp}", (dir / "tmp").string());
  cmd = replace_all(cmd, "{ratio}", canonical_number(ratio));
  if (std::system(cmd.c_str()) != 0) throw std::runtime_error("jpeg2000: encoder command failed: " + cmd);
  GrayImage decoded = load_image(out);
  if (!decoded.same_shape(image)) throw std::runtime_error("jpeg2000: decoded image has wrong size");
  return decoded;
}

}  // namespace

std::string_view to_string(AttackKind kind) { return kind_def(kind).name; }

double AttackSpec::number(const std::string& key) const {
  const auto v = parse_number(text(key));
  if (!v) throw ValidationError("attack parameter '" + key + "' is not numeric");
  return *v;
}

const std::string& AttackSpec::text(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) {
    throw ValidationError("attack " + std::string(to_string(kind)) + " has no parameter '" + key + "'");
  }
  return it->second;
}

AttackSpec parse_attack_spec(std::string_view text) {
  AttackSpec spec;
  std::string_view body = text;

  if (const auto at = body.rfind('@'); at != std::string_view::npos) {
    const std::string_view seed_text = body.substr(at + 1);
    std::uint64_t seed = 0;
    const auto res = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), seed);
    if (seed_text.empty() || res.ec != std::errc() || res.ptr != seed_text.data() + seed_text.size()) {
      throw AttackParseError("invalid seed '" + std::string(seed_text) + "'");
    }
    spec.seed = seed;
    spec.seed_explicit = true;
    body = body.substr(0, at);
  }

  const auto colon = body.find(':');
  const std::string_view kind_text = body.substr(0, colon);
  const KindDef* def = nullptr;
  for (const auto& k : kind_table()) {
    if (k.name == kind_text) def = &k;
  }
  if (def == nullptr) throw AttackParseError("unknown attack kind '" + std::string(kind_text) + "'");
  spec.kind = def->kind;

  if (colon != std::string_view::npos) {
    std::string_view rest = body.substr(colon + 1);
    if (rest.empty()) throw AttackParseError("empty parameter list after '" + std::string(kind_text) + ":'");
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view pair = rest.substr(0, comma);
      const auto eq = pair.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw AttackParseError("malformed parameter '" + std::string(pair) + "' (expected key=value)");
      }
      const std::string_view key = pair.substr(0, eq);
      const ParamDef* param = nullptr;
      for (const auto& p : def->params) {
        if (p.key == key || std::find(p.aliases.begin(), p.aliases.end(), key) != p.aliases.end()) {
          param = &p;
        }
      }
      if (param == nullptr) {
        throw AttackParseError("unknown parameter '" + std::string(key) + "' for " + std::string(kind_text));
      }
      if (spec.params.count(param->key)) {
        throw AttackParseError("duplicate parameter '" + std::string(key) + "'");
      }
      spec.params[param->key] = validate_value(*param, kind_text, pair.substr(eq + 1));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }

  for (const auto& p : def->params) spec.params.try_emplace(p.key, p.default_value);
  return spec;
}

std::string format_attack_params(const AttackSpec& spec) {
  std::string out;
  for (const auto& [key, value] : spec.params) {
    if (!out.empty()) out += ';';
    out += key + "=" + value;
  }
  return out;
}

std::string format_attack_spec(const AttackSpec& spec) {
  std::string out(to_string(spec.kind));
  bool first = true;
  for (const auto& [key, value] : spec.params) {
    out += first ? ':' : ',';
    out += key + "=" + value;
    first = false;
  }
  if (spec.seed_explicit) out += "@" + std::to_string(spec.seed);
  return out;
}

GrayImage apply_attack(const GrayImage& image, const AttackSpec& spec, const AttackContext& context) {
  switch (spec.kind) {
    case AttackKind::none:
      return image;

    case AttackKind::additive_uniform_noise: {
      const double amp = spec.number("amplitude");
      Rng rng(spec.seed);
      GrayImage out(image.height(), image.width());
      for (Eigen::Index r = 0; r < image.height(); ++r) {
        for (Eigen::Index c = 0; c < image.width(); ++c) {
          out(r, c) = quantize_pixel(image(r, c) + amp * (2.0 * rng.uniform() - 1.0));
        }
      }
      return out;
    }

    case AttackKind::gaussian_noise: {
      const double mean = spec.number("mean");
      const double sd = std::sqrt(spec.number("var"));
      Rng rng(spec.seed);
      GrayImage out(image.height(), image.width());
      for (Eigen::Index r = 0; r < image.height(); ++r) {
        for (Eigen::Index c = 0; c < image.width(); ++c) {
          const double v = std::clamp(image(r, c) / 255.0 + mean + sd * rng.normal(), 0.0, 1.0);
          out(r, c) = quantize_pixel(255.0 * v);
        }
      }
      return out;
    }

    case AttackKind::crop:
      return crop(image, spec.number("fraction"), spec.text("anchor"));

    case AttackKind::jpeg:
      return jpeg_round_trip(image, static_cast<int>(spec.number("q")));

    case AttackKind::jpeg2000:
      return jpeg2000_round_trip(image, spec.number("ratio"), context.jp2_cmd);

    case AttackKind::median_filter: {
      const int size = static_cast<int>(spec.number("size"));
      return rank_filter(image, size, size * size / 2);
    }

    case AttackKind::rotate:
      return rotate(image, spec.number("deg"), spec.text("interp") == "nearest");

    case AttackKind::gamma: {
      const double g = spec.number("g");
      if (g == 1.0) return image;
      return map_pixels(image, [g](double x) { return 255.0 * std::pow(x / 255.0, g); });
    }

    case AttackKind::intensity_adjust: {
      const double lo = spec.number("lo");
      const double hi = spec.number("hi");
      return map_pixels(image, [lo, hi](double x) { return 255.0 * (lo + (hi - lo) * x / 255.0); });
    }

    case AttackKind::gaussian_blur: {
      const double sigma = spec.number("radius");
      const int half = static_cast<int>(std::ceil(3.0 * sigma));
      std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
      double total = 0.0;
      for (int k = -half; k <= half; ++k) {
        const double w = std::exp(-0.5 * (k * k) / (sigma * sigma));
        kernel[static_cast<std::size_t>(k + half)] = w;
        total += w;
      }
      for (double& w : kernel) w /= total;
      return separable_filter(image, kernel);
    }

    case AttackKind::lowpass_blur: {
      const int half = static_cast<int>(spec.number("radius"));
      const std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1), 1.0 / (2 * half + 1));
      return separable_filter(image, kernel);
    }

    case AttackKind::contrast_enhance: {
      const double c = spec.number("c");
      return map_pixels(image, [c](double x) { return 128.0 + c * (x - 128.0); });
    }

    case AttackKind::dilate: {
      const int size = static_cast<int>(spec.number("size"));
      return rank_filter(image, size, size * size - 1);
    }

    case AttackKind::erode:
      return rank_filter(image, static_cast<int>(spec.number("size")), 0);

    case AttackKind::rescale_uniform: {
      const auto mid_w = static_cast<Eigen::Index>(spec.number("mid"));
      const auto mid_h = std::max<Eigen::Index>(
          1, static_cast<Eigen::Index>(std::round(static_cast<double>(image.height()) *
                                                  static_cast<double>(mid_w) /
                                                  static_cast<double>(image.width()))));
      return rescale_through(image, mid_h, mid_w);
    }

    case AttackKind::rescale_nonuniform:
      return rescale_through(image, static_cast<Eigen::Index>(spec.number("h")),
                             static_cast<Eigen::Index>(spec.number("w")));
  }
  throw UnsupportedAttackError("unsupported attack kind");
}

}  // namespace hilbertmark
