#include "hilbertmark/metrics.hpp"

#include <string>

namespace hilbertmark {

std::string_view to_string(PeakMode mode) {
  return mode == PeakMode::reference_max ? "reference_max" : "255";
}

PeakMode parse_peak_mode(std::string_view text) {
  if (text == "reference_max" || text == "max") return PeakMode::reference_max;
  if (text == "255" || text == "full_scale_255") return PeakMode::full_scale_255;
  throw ValidationError("unknown peak mode '" + std::string(text) +
                        "' (expected reference_max|255)");
}

GrayImage image_diff(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a.pixels(), b.pixels(), "image_diff");
  const Eigen::ArrayXXi d = (a.pixels().cast<int>() - b.pixels().cast<int>()).array().abs();
  return GrayImage(PixelMatrix(d.min(255).cast<std::uint8_t>().matrix()));
}

}  // namespace hilbertmark
