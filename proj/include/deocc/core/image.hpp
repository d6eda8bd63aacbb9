#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace deocc {

struct Size2 {
  int height = 0;
  int width = 0;

  int area() const { return height * width; }
  bool operator==(const Size2&) const = default;
};

/// Three-channel image stored planar (C×H×W), values in [0,1].
class ImageTensor {
 public:
  static constexpr int kChannels = 3;

  ImageTensor() = default;
  explicit ImageTensor(Size2 size, float fill = 0.0f);

  int height() const { return size_.height; }
  int width() const { return size_.width; }
  Size2 size() const { return size_; }
  bool empty() const { return data_.empty(); }

  float& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  float at(int c, int y, int x) const { return data_[index(c, y, x)]; }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  // Throws ValidationError on non-finite or out-of-range values.
  void validate() const;

  bool operator==(const ImageTensor&) const = default;

 private:
  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * size_.height + y) * size_.width + x;
  }

  Size2 size_{};
  std::vector<float> data_;
};

/// Single-channel mask with values exactly 0 or 1.
class BinaryMask {
 public:
  BinaryMask() = default;
  explicit BinaryMask(Size2 size, std::uint8_t fill = 0);

  int height() const { return size_.height; }
  int width() const { return size_.width; }
  Size2 size() const { return size_; }

  std::uint8_t& at(int y, int x) { return data_[static_cast<std::size_t>(y) * size_.width + x]; }
  std::uint8_t at(int y, int x) const { return data_[static_cast<std::size_t>(y) * size_.width + x]; }

  std::span<std::uint8_t> data() { return data_; }
  std::span<const std::uint8_t> data() const { return data_; }

  std::int64_t count() const;
  bool subset_of(const BinaryMask& other) const;
  void validate() const;

  bool operator==(const BinaryMask&) const = default;

 private:
  Size2 size_{};
  std::vector<std::uint8_t> data_;
};

/// Per-pixel body-part labels; label 0 is background.
///
/// This is the compact form of the one-hot parsing encoding: channel c of
/// the encoding is 1 exactly where the label equals c, so the per-pixel
/// channel sum is always 1.
class ParsingMap {
 public:
  ParsingMap() = default;
  ParsingMap(Size2 size, int part_count);

  int part_count() const { return part_count_; }
  int height() const { return size_.height; }
  int width() const { return size_.width; }
  Size2 size() const { return size_; }

  std::uint8_t& at(int y, int x) { return labels_[static_cast<std::size_t>(y) * size_.width + x]; }
  std::uint8_t at(int y, int x) const { return labels_[static_cast<std::size_t>(y) * size_.width + x]; }

  std::span<std::uint8_t> labels() { return labels_; }
  std::span<const std::uint8_t> labels() const { return labels_; }

  float channel(int c, int y, int x) const { return at(y, x) == c ? 1.0f : 0.0f; }

  // P×H×W one-hot encoding.
  std::vector<float> one_hot() const;

  // Foreground pixels (label > 0).
  BinaryMask foreground() const;

  // Labels outside `mask` reset to background.
  ParsingMap restricted_to(const BinaryMask& mask) const;

  void validate() const;

  bool operator==(const ParsingMap&) const = default;

 private:
  Size2 size_{};
  int part_count_ = 0;
  std::vector<std::uint8_t> labels_;
};

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_and_not(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b);

BinaryMask resize_nearest(const BinaryMask& mask, Size2 size);
ParsingMap resize_nearest(const ParsingMap& parsing, Size2 size);
ImageTensor resize_bilinear(const ImageTensor& image, Size2 size);

}  // namespace deocc
