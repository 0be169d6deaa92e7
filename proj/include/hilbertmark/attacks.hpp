#ifndef HILBERTMARK_ATTACKS_HPP_
#define HILBERTMARK_ATTACKS_HPP_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hilbertmark/types.hpp"

namespace hilbertmark {

enum class AttackKind {
  none,
  additive_uniform_noise,
  gaussian_noise,
  crop,
  jpeg,
  jpeg2000,
  median_filter,
  rotate,
  gamma,
  intensity_adjust,
  gaussian_blur,
  lowpass_blur,
  contrast_enhance,
  dilate,
  erode,
  rescale_uniform,
  rescale_nonuniform,
};

std::string_view to_string(AttackKind kind);

/// Malformed attack text; the message names the offending token.
class AttackParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The attack cannot run in this configuration (e.g. no JPEG 2000 encoder).
class UnsupportedAttackError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One attack with every parameter filled in (defaults included).
///
/// Parameter keys per kind, with defaults:
///   additive_uniform_noise  amplitude=10
///   gaussian_noise          mean=0, var=0.01         (fractions of full scale)
///   crop                    fraction=0.25, anchor=center
///   jpeg                    q=75
///   jpeg2000                ratio=2
///   median_filter           size=3
///   rotate                  deg=1, interp=bilinear
///   gamma                   g=1
///   intensity_adjust        lo=0.1, hi=1
///   gaussian_blur           radius=1
///   lowpass_blur            radius=1
///   contrast_enhance        c=1
///   dilate, erode           size=3
///   rescale_uniform         mid=256
///   rescale_nonuniform      w=320, h=240
struct AttackSpec {
  AttackKind kind = AttackKind::none;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  bool seed_explicit = false;

  double number(const std::string& key) const;
  const std::string& text(const std::string& key) const;

  bool stochastic() const {
    return kind == AttackKind::additive_uniform_noise || kind == AttackKind::gaussian_noise;
  }

  friend bool operator==(const AttackSpec&, const AttackSpec&) = default;
};

/// Parses `kind[:key=value[,key=value...]][@seed]`.
AttackSpec parse_attack_spec(std::string_view text);

/// Canonical text form; parse_attack_spec(format_attack_spec(s)) == s.
std::string format_attack_spec(const AttackSpec& spec);

/// `key=value` pairs joined by ';' (comma-free, for CSV cells).
std::string format_attack_params(const AttackSpec& spec);

struct AttackContext {
  /// Command template for an external JPEG 2000 round trip. Placeholders:
  /// {in} input PGM, {out} decoded PGM to produce, {ratio}, {tmp} scratch
  /// path prefix. Empty means JPEG 2000 is unsupported.
  std::string jp2_cmd;
};

/// Applies `spec` to `image`. The output has the input's dimensions.
GrayImage apply_attack(const GrayImage& image, const AttackSpec& spec,
                       const AttackContext& context = {});

/// Baseline JPEG round trip (libjpeg) at quality q in [1, 100].
GrayImage jpeg_round_trip(const GrayImage& image, int quality);
std::vector<std::uint8_t> encode_jpeg(const GrayImage& image, int quality);
GrayImage decode_jpeg(const std::vector<std::uint8_t>& bytes);

}  // namespace hilbertmark

#endif  // HILBERTMARK_ATTACKS_HPP_
