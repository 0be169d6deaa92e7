#include "hilbertmark/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>

#include <png.h>

namespace hilbertmark {

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

bool is_png(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 8 && std::equal(bytes.begin(), bytes.begin() + 8, kPngSignature);
}

/// Cursor over a PNM header: whitespace and '#' comments are skipped between tokens.
class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  long next_int(const char* field) {
    skip_separators();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw ImageIoError(ImageErrorCategory::malformed,
                         std::string("PGM header: expected ") + field);
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) {
        throw ImageIoError(ImageErrorCategory::malformed, std::string("PGM header: ") + field +
                                                              " too large");
      }
      ++pos_;
    }
    return value;
  }

  /// Consumes the single whitespace byte that ends the header.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ImageIoError(ImageErrorCategory::malformed, "PGM header: missing separator before raster");
    }
    return pos_ + 1;
  }

 private:
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

ImageFormat format_for_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" ? ImageFormat::png : ImageFormat::pgm;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw ImageIoError(ImageErrorCategory::not_found, "no such file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError(ImageErrorCategory::io, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ImageIoError(ImageErrorCategory::io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ImageIoError(ImageErrorCategory::io, "write failed: " + path.string());
}

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') {
    throw ImageIoError(ImageErrorCategory::malformed, "not a PNM file");
  }
  switch (bytes[1]) {
    case '5':
      break;
    case '3':
    case '6':
      throw ImageIoError(ImageErrorCategory::unsupported_color, "color PPM input is not supported");
    default:
      throw ImageIoError(ImageErrorCategory::malformed,
                         std::string("unsupported PNM variant P") + static_cast<char>(bytes[1]));
  }

  PnmHeaderReader header(bytes);
  const long width = header.next_int("width");
  const long height = header.next_int("height");
  const long maxval = header.next_int("maxval");
  if (width < 1 || height < 1) {
    throw ImageIoError(ImageErrorCategory::malformed, "PGM dimensions must be positive");
  }
  if (maxval != 255) {
    throw ImageIoError(ImageErrorCategory::unsupported_depth,
                       "PGM maxval " + std::to_string(maxval) + " unsupported (need 255)");
  }
  const std::size_t offset = header.raster_offset();
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - offset < count) {
    throw ImageIoError(ImageErrorCategory::malformed, "PGM raster truncated");
  }

  GrayImage image(height, width);
  const std::uint8_t* raster = bytes.data() + offset;
  for (long r = 0; r < height; ++r) {
    for (long c = 0; c < width; ++c) image(r, c) = raster[r * width + c];
  }
  return image;
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image) {
  const std::string header =
      "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + static_cast<std::size_t>(image.width() * image.height()));
  for (Eigen::Index r = 0; r < image.height(); ++r) {
    for (Eigen::Index c = 0; c < image.width(); ++c) out.push_back(image(r, c));
  }
  return out;
}

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw ImageIoError(ImageErrorCategory::malformed, std::string("PNG: ") + png.message);
  }
  const auto fail = [&png](ImageErrorCategory category, const std::string& what) {
    png_image_free(&png);
    throw ImageIoError(category, what);
  };
  if (png.format & PNG_FORMAT_FLAG_LINEAR) fail(ImageErrorCategory::unsupported_depth, "16-bit PNG is not supported");
  if (png.format & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_COLORMAP)) {
    fail(ImageErrorCategory::unsupported_color, "color PNG is not supported");
  }
  if (png.format & PNG_FORMAT_FLAG_ALPHA) {
    fail(ImageErrorCategory::unsupported_color, "PNG with alpha channel is not supported");
  }

  png.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw ImageIoError(ImageErrorCategory::malformed, "PNG: " + msg);
  }

  GrayImage image(png.height, png.width);
  for (Eigen::Index r = 0; r < image.height(); ++r) {
    for (Eigen::Index c = 0; c < image.width(); ++c) {
      image(r, c) = buffer[static_cast<std::size_t>(r * image.width() + c)];
    }
  }
  return image;
}

std::vector<std::uint8_t> encode_png(const GrayImage& image) {
  std::vector<std::uint8_t> raster;
  raster.reserve(static_cast<std::size_t>(image.width() * image.height()));
  for (Eigen::Index r = 0; r < image.height(); ++r) {
    for (Eigen::Index c = 0; c < image.width(); ++c) raster.push_back(image(r, c));
  }

  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = PNG_FORMAT_GRAY;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, raster.data(), 0, nullptr)) {
    throw ImageIoError(ImageErrorCategory::io, std::string("PNG encode: ") + png.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, raster.data(), 0, nullptr)) {
    throw ImageIoError(ImageErrorCategory::io, std::string("PNG encode: ") + png.message);
  }
  out.resize(size);
  return out;
}

GrayImage decode_image(std::span<const std::uint8_t> bytes) {
  return is_png(bytes) ? decode_png(bytes) : decode_pgm(bytes);
}

GrayImage load_image(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  try {
    return decode_image(bytes);
  } catch (const ImageIoError& e) {
    throw ImageIoError(e.category(), path.string() + ": " + e.what());
  }
}

void save_image(const GrayImage& image, const std::filesystem::path& path,
                std::optional<ImageFormat> format) {
  const ImageFormat f = format.value_or(format_for_path(path));
  write_file(path, f == ImageFormat::png ? encode_png(image) : encode_pgm(image));
}

}  // namespace hilbertmark
