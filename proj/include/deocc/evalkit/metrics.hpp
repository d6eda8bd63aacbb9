#pragma once

#include <optional>
#include <span>
#include <vector>

#include "deocc/core/image.hpp"

namespace deocc::evalkit {

// |A∩B| / |A∪B|; two empty masks give 1.
double iou(const BinaryMask& a, const BinaryMask& b);

struct IouTriplet {
  double modal = 0.0;
  double amodal = 0.0;
  double invisible = 0.0;
};

// Invisible masks are amodal ∧ ¬modal on both sides.
IouTriplet iou_triplet(const BinaryMask& pred_modal, const BinaryMask& pred_amodal, const BinaryMask& gt_modal,
                       const BinaryMask& gt_amodal);

// Mean absolute difference over all entries.
double l1_error(std::span<const float> a, std::span<const float> b);
double l1_error(const ImageTensor& a, const ImageTensor& b);

// Mean absolute difference over the pixels where `region` is 1 (all
// channels). Empty region gives nullopt.
std::optional<double> l1_error(const ImageTensor& a, const ImageTensor& b, const BinaryMask& region);
std::optional<double> l1_error(std::span<const float> a, std::span<const float> b, const BinaryMask& region);

// A 0/1 mask as floats, for l1 against soft maps.
std::vector<float> as_floats(const BinaryMask& mask);

}  // namespace deocc::evalkit
