#include "deocc/core/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deocc/core/errors.hpp"

namespace deocc {

namespace {

void require_same_size(Size2 a, Size2 b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": size mismatch " + std::to_string(a.height) + "x" +
                          std::to_string(a.width) + " vs " + std::to_string(b.height) + "x" +
                          std::to_string(b.width));
  }
}

// Source coordinate for nearest-neighbour sampling, matching the
// floor(dst * src / dst_size) rule used by the tensor resize.
int nearest_source(int dst, int src_size, int dst_size) {
  return std::min(src_size - 1, static_cast<int>(static_cast<std::int64_t>(dst) * src_size / dst_size));
}

}  // namespace

ImageTensor::ImageTensor(Size2 size, float fill)
    : size_(size), data_(static_cast<std::size_t>(kChannels) * size.area(), fill) {}

void ImageTensor::validate() const {
  if (data_.size() != static_cast<std::size_t>(kChannels) * size_.area()) {
    throw ValidationError("image buffer does not match its 3xHxW shape");
  }
  for (float v : data_) {
    if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
      throw ValidationError("image value outside [0,1]: " + std::to_string(v));
    }
  }
}

BinaryMask::BinaryMask(Size2 size, std::uint8_t fill)
    : size_(size), data_(static_cast<std::size_t>(size.area()), fill) {}

std::int64_t BinaryMask::count() const {
  std::int64_t n = 0;
  for (auto v : data_) n += v;
  return n;
}

bool BinaryMask::subset_of(const BinaryMask& other) const {
  require_same_size(size_, other.size_, "subset_of");
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (data_[i] > other.data_[i]) return false;
  }
  return true;
}

void BinaryMask::validate() const {
  if (data_.size() != static_cast<std::size_t>(size_.area())) {
    throw ValidationError("mask buffer does not match its HxW shape");
  }
  for (auto v : data_) {
    if (v > 1) throw ValidationError("mask value is not binary: " + std::to_string(v));
  }
}

ParsingMap::ParsingMap(Size2 size, int part_count)
    : size_(size), part_count_(part_count), labels_(static_cast<std::size_t>(size.area()), 0) {
  if (part_count < 2 || part_count > 255) {
    throw ValidationError("part_count must be in [2, 255], got " + std::to_string(part_count));
  }
}

std::vector<float> ParsingMap::one_hot() const {
  const std::size_t plane = labels_.size();
  std::vector<float> out(plane * part_count_, 0.0f);
  for (std::size_t i = 0; i < plane; ++i) out[labels_[i] * plane + i] = 1.0f;
  return out;
}

BinaryMask ParsingMap::foreground() const {
  BinaryMask mask(size_);
  for (std::size_t i = 0; i < labels_.size(); ++i) mask.data()[i] = labels_[i] > 0 ? 1 : 0;
  return mask;
}

ParsingMap ParsingMap::restricted_to(const BinaryMask& mask) const {
  require_same_size(size_, mask.size(), "restricted_to");
  ParsingMap out = *this;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!mask.data()[i]) out.labels_[i] = 0;
  }
  return out;
}

void ParsingMap::validate() const {
  if (labels_.size() != static_cast<std::size_t>(size_.area())) {
    throw ValidationError("parsing buffer does not match its HxW shape");
  }
  for (auto v : labels_) {
    if (v >= part_count_) {
      throw ValidationError("parsing label " + std::to_string(v) + " >= part_count " +
                            std::to_string(part_count_));
    }
  }
}

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  require_same_size(a.size(), b.size(), "mask_and");
  BinaryMask out(a.size());
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = a.data()[i] & b.data()[i];
  return out;
}

BinaryMask mask_and_not(const BinaryMask& a, const BinaryMask& b) {
  require_same_size(a.size(), b.size(), "mask_and_not");
  BinaryMask out(a.size());
  for (std::size_t i = 0; i < out.data().size(); ++i) {
    out.data()[i] = (a.data()[i] && !b.data()[i]) ? 1 : 0;
  }
  return out;
}

BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
  require_same_size(a.size(), b.size(), "mask_or");
  BinaryMask out(a.size());
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = a.data()[i] | b.data()[i];
  return out;
}

BinaryMask resize_nearest(const BinaryMask& mask, Size2 size) {
  if (mask.size() == size) return mask;
  BinaryMask out(size);
  for (int y = 0; y < size.height; ++y) {
    const int sy = nearest_source(y, mask.height(), size.height);
    for (int x = 0; x < size.width; ++x) {
      out.at(y, x) = mask.at(sy, nearest_source(x, mask.width(), size.width));
    }
  }
  return out;
}

ParsingMap resize_nearest(const ParsingMap& parsing, Size2 size) {
  if (parsing.size() == size) return parsing;
  ParsingMap out(size, parsing.part_count());
  for (int y = 0; y < size.height; ++y) {
    const int sy = nearest_source(y, parsing.height(), size.height);
    for (int x = 0; x < size.width; ++x) {
      out.at(y, x) = parsing.at(sy, nearest_source(x, parsing.width(), size.width));
    }
  }
  return out;
}

ImageTensor resize_bilinear(const ImageTensor& image, Size2 size) {
  if (image.size() == size) return image;
  ImageTensor out(size);
  const double sy = static_cast<double>(image.height()) / size.height;
  const double sx = static_cast<double>(image.width()) / size.width;
  for (int y = 0; y < size.height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, image.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, image.height() - 1);
    const double ty = fy - y0;
    for (int x = 0; x < size.width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, image.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, image.width() - 1);
      const double tx = fx - x0;
      for (int c = 0; c < ImageTensor::kChannels; ++c) {
        const double top = image.at(c, y0, x0) * (1 - tx) + image.at(c, y0, x1) * tx;
        const double bottom = image.at(c, y1, x0) * (1 - tx) + image.at(c, y1, x1) * tx;
        out.at(c, y, x) = static_cast<float>(std::clamp(top * (1 - ty) + bottom * ty, 0.0, 1.0));
      }
    }
  }
  return out;
}

}  // namespace deocc
