#include "hilbertmark/types.hpp"

#include <cmath>

namespace hilbertmark {

std::string_view to_string(Axis axis) { return axis == Axis::columns ? "columns" : "rows"; }

Axis parse_axis(std::string_view text) {
  if (text == "columns" || text == "cols") return Axis::columns;
  if (text == "rows") return Axis::rows;
  throw ValidationError("unknown axis '" + std::string(text) + "' (expected columns|rows)");
}

GrayImage::GrayImage(Eigen::Index height, Eigen::Index width, std::uint8_t fill) {
  if (height < 1 || width < 1) throw ValidationError("image dimensions must be at least 1x1");
  pixels_ = PixelMatrix::Constant(height, width, fill);
}

GrayImage::GrayImage(PixelMatrix pixels) : pixels_(std::move(pixels)) {
  if (pixels_.rows() < 1 || pixels_.cols() < 1) {
    throw ValidationError("image dimensions must be at least 1x1");
  }
}

std::uint8_t quantize_pixel(double value) {
  // std::round is half-away-from-zero.
  const double r = std::round(value);
  if (r <= 0.0) return 0;
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

GrayImage quantize(const RealField& values) {
  if (!values.allFinite()) throw ValidationError("quantize: non-finite value");
  return GrayImage(PixelMatrix(values.unaryExpr([](double v) { return quantize_pixel(v); })));
}

}  // namespace hilbertmark
