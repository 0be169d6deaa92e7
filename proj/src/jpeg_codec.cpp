#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <jpeglib.h>

#include "hilbertmark/attacks.hpp"

namespace hilbertmark {

namespace {

struct ErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void on_error(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<ErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void on_message(j_common_ptr) {}

}  // namespace

std::vector<std::uint8_t> encode_jpeg(const GrayImage& image, int quality) {
  if (quality < 1 || quality > 100) throw ValidationError("JPEG quality must be in [1, 100]");

  std::vector<JSAMPLE> raster(static_cast<std::size_t>(image.width() * image.height()));
  for (Eigen::Index r = 0; r < image.height(); ++r) {
    for (Eigen::Index c = 0; c < image.width(); ++c) {
      raster[static_cast<std::size_t>(r * image.width() + c)] = image(r, c);
    }
  }

  jpeg_compress_struct cinfo;
  ErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = on_error;
  err.base.output_message = on_message;

  unsigned char* volatile buffer = nullptr;
  unsigned long size = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::free(buffer);
    throw std::runtime_error(std::string("JPEG encode: ") + err.message);
  }

  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, const_cast<unsigned char**>(&buffer), &size);
  cinfo.image_width = static_cast<JDIMENSION>(image.width());
  cinfo.image_height = static_cast<JDIMENSION>(image.height());
  cinfo.input_components = 1;
  cinfo.in_color_space = JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = &raster[static_cast<std::size_t>(cinfo.next_scanline) *
                           static_cast<std::size_t>(image.width())];
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);

  std::vector<std::uint8_t> out(buffer, buffer + size);
  std::free(buffer);
  return out;
}

GrayImage decode_jpeg(const std::vector<std::uint8_t>& bytes) {
  jpeg_decompress_struct cinfo;
  ErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = on_error;
  err.base.output_message = on_message;

  // Everything with a destructor lives outside the setjmp/longjmp region.
  std::vector<JSAMPLE> row;
  PixelMatrix pixels;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw std::runtime_error(std::string("JPEG decode: ") + err.message);
  }

  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_GRAYSCALE;
  jpeg_start_decompress(&cinfo);

  const auto width = static_cast<Eigen::Index>(cinfo.output_width);
  const auto height = static_cast<Eigen::Index>(cinfo.output_height);
  row.resize(static_cast<std::size_t>(width));
  pixels.resize(height, width);
  while (cinfo.output_scanline < cinfo.output_height) {
    const auto r = static_cast<Eigen::Index>(cinfo.output_scanline);
    JSAMPROW ptr = row.data();
    jpeg_read_scanlines(&cinfo, &ptr, 1);
    for (Eigen::Index c = 0; c < width; ++c) pixels(r, c) = row[static_cast<std::size_t>(c)];
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return GrayImage(std::move(pixels));
}

GrayImage jpeg_round_trip(const GrayImage& image, int quality) {
  return decode_jpeg(encode_jpeg(image, quality));
}

}  // namespace hilbertmark
