#include "deocc/datagen/ingest.hpp"

#include <algorithm>
#include <cmath>

#include "deocc/core/errors.hpp"

namespace deocc::datagen {

BinaryMask mask_from_gray(const png::GrayImage& gray) {
  bool uses_255 = false;
  bool uses_1 = false;
  for (auto v : gray.pixels) {
    if (v == 255) {
      uses_255 = true;
    } else if (v == 1) {
      uses_1 = true;
    } else if (v != 0) {
      throw ValidationError("mask is not binary (found gray value " + std::to_string(v) + ")");
    }
  }
  if (uses_1 && uses_255) throw ValidationError("mask mixes 1 and 255 as foreground values");
  BinaryMask mask(gray.size);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) mask.data()[i] = gray.pixels[i] ? 1 : 0;
  return mask;
}

IngestResult ingest_external(const ImageTensor& image, const BinaryMask& mask,
                             const std::optional<ParsingMap>& parsing, Size2 canvas,
                             int part_count) {
  image.validate();
  mask.validate();
  if (image.size() != mask.size()) throw ValidationError("mask size does not match image size");
  if (parsing) {
    parsing->validate();
    if (parsing->size() != image.size()) throw ValidationError("parsing size does not match image size");
    if (parsing->part_count() != part_count) throw ValidationError("parsing part_count mismatch");
    if (parsing->foreground() != mask) {
      throw ValidationError("parsing foreground does not match the mask");
    }
  }
  if (canvas.height < 1 || canvas.width < 1) throw ValidationError("empty canvas");

  IngestResult result;
  const auto area = mask.count();
  if (area == 0) throw ValidationError("mask is empty");
  if (area == mask.size().area()) {
    result.warnings.push_back("mask covers the whole image; the person touches every border");
  }

  const double scale = std::min(static_cast<double>(canvas.height) / image.height(),
                                static_cast<double>(canvas.width) / image.width());
  const Size2 fitted{std::clamp(static_cast<int>(std::lround(image.height() * scale)), 1, canvas.height),
                     std::clamp(static_cast<int>(std::lround(image.width() * scale)), 1, canvas.width)};
  const ImageTensor img = resize_bilinear(image, fitted);
  const BinaryMask msk = resize_nearest(mask, fitted);
  ParsingMap prs(image.size(), part_count);
  if (parsing) {
    prs = *parsing;
  } else {
    for (std::size_t i = 0; i < prs.labels().size(); ++i) prs.labels()[i] = mask.data()[i] ? 1 : 0;
  }
  prs = resize_nearest(prs, fitted);
  if (msk.count() == 0) throw ValidationError("mask vanishes after resizing to the canvas");

  const int top = (canvas.height - fitted.height) / 2;
  const int left = (canvas.width - fitted.width) / 2;
  result.human = {ImageTensor(canvas), BinaryMask(canvas), ParsingMap(canvas, part_count)};
  for (int y = 0; y < fitted.height; ++y) {
    for (int x = 0; x < fitted.width; ++x) {
      for (int c = 0; c < ImageTensor::kChannels; ++c) {
        result.human.image.at(c, top + y, left + x) = img.at(c, y, x);
      }
      result.human.amodal.at(top + y, left + x) = msk.at(y, x);
      result.human.parsing.at(top + y, left + x) = prs.at(y, x);
    }
  }
  return result;
}

}  // namespace deocc::datagen
