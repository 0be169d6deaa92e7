#ifndef HILBERTMARK_IMAGE_IO_HPP_
#define HILBERTMARK_IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hilbertmark/types.hpp"

namespace hilbertmark {

enum class ImageErrorCategory { not_found, malformed, unsupported_depth, unsupported_color, io };

class ImageIoError : public std::runtime_error {
 public:
  ImageIoError(ImageErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ImageErrorCategory category() const { return category_; }

 private:
  ImageErrorCategory category_;
};

enum class ImageFormat { pgm, png };

/// Chooses PNG for a `.png` extension (case-insensitive) and PGM otherwise.
ImageFormat format_for_path(const std::filesystem::path& path);

/// Reads binary PGM (P5, maxval 255) or 8-bit grayscale PNG, detected by content.
GrayImage load_image(const std::filesystem::path& path);
GrayImage decode_image(std::span<const std::uint8_t> bytes);

void save_image(const GrayImage& image, const std::filesystem::path& path,
                std::optional<ImageFormat> format = std::nullopt);

/// Canonical P5 encoding: "P5\n<w> <h>\n255\n" followed by row-major pixels.
std::vector<std::uint8_t> encode_pgm(const GrayImage& image);
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_png(const GrayImage& image);
GrayImage decode_png(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace hilbertmark

#endif  // HILBERTMARK_IMAGE_IO_HPP_
