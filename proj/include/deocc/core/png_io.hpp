#pragma once

#include <filesystem>

#include "deocc/core/image.hpp"

namespace deocc::png {

// 8-bit RGB. Values are quantised with round(v * 255).
void write_rgb(const std::filesystem::path& path, const ImageTensor& image);
ImageTensor read_rgb(const std::filesystem::path& path);

// 8-bit grayscale holding 0/1 mask values as 0/255.
void write_mask(const std::filesystem::path& path, const BinaryMask& mask);
BinaryMask read_mask(const std::filesystem::path& path);

// 8-bit grayscale holding raw labels.
void write_labels(const std::filesystem::path& path, const ParsingMap& parsing);
ParsingMap read_labels(const std::filesystem::path& path, int part_count);

// Raw 8-bit gray access for ingesting arbitrary files.
struct GrayImage {
  Size2 size;
  std::vector<std::uint8_t> pixels;
};
GrayImage read_gray(const std::filesystem::path& path);

}  // namespace deocc::png
