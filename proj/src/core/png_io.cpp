#include "deocc/core/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>

#include "deocc/core/errors.hpp"

namespace deocc::png {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr file(std::fopen(path.c_str(), mode));
  if (!file) throw FormatError("cannot open " + path.string());
  return file;
}

void write_png(const std::filesystem::path& path, Size2 size, int channels,
               const std::vector<std::uint8_t>& interleaved) {
  FilePtr file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw FormatError("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw FormatError("failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, size.width, size.height, 8,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(size.width) * channels;
  for (int y = 0; y < size.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(interleaved.data() + y * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// Decodes to 8-bit gray or RGB; alpha is stripped, palettes expanded.
std::vector<std::uint8_t> read_png(const std::filesystem::path& path, Size2& size, int& channels,
                                   bool want_rgb) {
  FilePtr file = open_file(path, "rb");
  png_byte header[8];
  if (std::fread(header, 1, 8, file.get()) != 8 || png_sig_cmp(header, 0, 8)) {
    throw FormatError(path.string() + " is not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("corrupt PNG " + path.string());
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_byte color = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  const bool is_gray = !(color & PNG_COLOR_MASK_COLOR) && color != PNG_COLOR_TYPE_PALETTE;
  if (want_rgb && is_gray) png_set_gray_to_rgb(png);
  if (!want_rgb && !is_gray) png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  png_read_update_info(png, info);

  size = {static_cast<int>(png_get_image_height(png, info)),
          static_cast<int>(png_get_image_width(png, info))};
  channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  std::vector<std::uint8_t> pixels(stride * size.height);
  std::vector<png_bytep> rows(size.height);
  for (int y = 0; y < size.height; ++y) rows[y] = pixels.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return pixels;
}

std::uint8_t quantise(float v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

}  // namespace

void write_rgb(const std::filesystem::path& path, const ImageTensor& image) {
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(image.size().area()) * 3);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        buf[(static_cast<std::size_t>(y) * image.width() + x) * 3 + c] = quantise(image.at(c, y, x));
      }
    }
  }
  write_png(path, image.size(), 3, buf);
}

ImageTensor read_rgb(const std::filesystem::path& path) {
  Size2 size;
  int channels = 0;
  auto pixels = read_png(path, size, channels, true);
  if (channels != 3) throw FormatError(path.string() + ": expected RGB data");
  ImageTensor image(size);
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        image.at(c, y, x) = pixels[(static_cast<std::size_t>(y) * size.width + x) * 3 + c] / 255.0f;
      }
    }
  }
  return image;
}

void write_mask(const std::filesystem::path& path, const BinaryMask& mask) {
  std::vector<std::uint8_t> buf(mask.data().begin(), mask.data().end());
  for (auto& v : buf) v = v ? 255 : 0;
  write_png(path, mask.size(), 1, buf);
}

GrayImage read_gray(const std::filesystem::path& path) {
  GrayImage gray;
  int channels = 0;
  gray.pixels = read_png(path, gray.size, channels, false);
  if (channels != 1) throw FormatError(path.string() + ": expected single-channel data");
  return gray;
}

BinaryMask read_mask(const std::filesystem::path& path) {
  GrayImage gray = read_gray(path);
  BinaryMask mask(gray.size);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
    const auto v = gray.pixels[i];
    if (v != 0 && v != 255) {
      throw FormatError(path.string() + ": mask pixel is neither 0 nor 255");
    }
    mask.data()[i] = v ? 1 : 0;
  }
  return mask;
}

void write_labels(const std::filesystem::path& path, const ParsingMap& parsing) {
  std::vector<std::uint8_t> buf(parsing.labels().begin(), parsing.labels().end());
  write_png(path, parsing.size(), 1, buf);
}

ParsingMap read_labels(const std::filesystem::path& path, int part_count) {
  GrayImage gray = read_gray(path);
  ParsingMap parsing(gray.size, part_count);
  std::copy(gray.pixels.begin(), gray.pixels.end(), parsing.labels().begin());
  try {
    parsing.validate();
  } catch (const ValidationError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return parsing;
}

}  // namespace deocc::png
