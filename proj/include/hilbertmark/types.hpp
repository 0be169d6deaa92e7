#ifndef HILBERTMARK_TYPES_HPP_
#define HILBERTMARK_TYPES_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace hilbertmark {

/// Dense height x width matrix; rows index image rows, columns index image columns.
template <typename Scalar>
using Field = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RealField = Field<double>;
using PixelMatrix = Field<std::uint8_t>;

/// Direction along which the 1D analytic signal is formed.
/// `columns` transforms each column (length = height); `rows` each row.
enum class Axis { columns, rows };

std::string_view to_string(Axis axis);
Axis parse_axis(std::string_view text);

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The input admits no embedding trade-off (e.g. watermark amplitude or host
/// phase identically zero), so the optimizer cannot produce a scaling factor.
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// 8-bit grayscale raster. Always at least 1x1.
class GrayImage {
 public:
  GrayImage(Eigen::Index height, Eigen::Index width, std::uint8_t fill = 0);
  explicit GrayImage(PixelMatrix pixels);

  Eigen::Index width() const { return pixels_.cols(); }
  Eigen::Index height() const { return pixels_.rows(); }

  std::uint8_t operator()(Eigen::Index row, Eigen::Index col) const { return pixels_(row, col); }
  std::uint8_t& operator()(Eigen::Index row, Eigen::Index col) { return pixels_(row, col); }

  const PixelMatrix& pixels() const { return pixels_; }
  PixelMatrix& pixels() { return pixels_; }

  RealField to_real() const { return pixels_.cast<double>(); }

  bool same_shape(const GrayImage& other) const {
    return width() == other.width() && height() == other.height();
  }

  friend bool operator==(const GrayImage& a, const GrayImage& b) {
    return a.same_shape(b) && a.pixels_ == b.pixels_;
  }

 private:
  PixelMatrix pixels_;
};

/// Rounds half away from zero, then clamps to [0, 255].
std::uint8_t quantize_pixel(double value);

/// Element-wise `quantize_pixel`. Non-finite values are rejected.
GrayImage quantize(const RealField& values);

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.allFinite();
}

template <typename A, typename B>
void require_same_shape(const Eigen::EigenBase<A>& a, const Eigen::EigenBase<B>& b,
                        const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) +
                          "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                          "x" + std::to_string(b.cols()) + ")");
  }
}

}  // namespace hilbertmark

#endif  // HILBERTMARK_TYPES_HPP_
