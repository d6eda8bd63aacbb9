#include "deocc/evalkit/metrics.hpp"

#include <cmath>

#include "deocc/core/errors.hpp"

namespace deocc::evalkit {

namespace {

void check_same(Size2 a, Size2 b) {
  if (a.height != b.height || a.width != b.width) throw ValidationError("metric inputs differ in size");
}

}  // namespace

double iou(const BinaryMask& a, const BinaryMask& b) {
  check_same(a.size(), b.size());
  std::size_t inter = 0;
  std::size_t uni = 0;
  const auto* pa = a.data().data();
  const auto* pb = b.data().data();
  const std::size_t n = static_cast<std::size_t>(a.size().height) * a.size().width;
  for (std::size_t i = 0; i < n; ++i) {
    inter += (pa[i] & pb[i]);
    uni += (pa[i] | pb[i]);
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

IouTriplet iou_triplet(const BinaryMask& pred_modal, const BinaryMask& pred_amodal, const BinaryMask& gt_modal,
                       const BinaryMask& gt_amodal) {
  IouTriplet t;
  t.modal = iou(pred_modal, gt_modal);
  t.amodal = iou(pred_amodal, gt_amodal);
  t.invisible = iou(mask_and_not(pred_amodal, pred_modal), mask_and_not(gt_amodal, gt_modal));
  return t;
}

double l1_error(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size() || a.empty()) throw ValidationError("l1_error needs equal non-empty inputs");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(static_cast<double>(a[i]) - b[i]);
  return sum / static_cast<double>(a.size());
}

double l1_error(const ImageTensor& a, const ImageTensor& b) {
  check_same(a.size(), b.size());
  return l1_error(a.data(), b.data());
}

std::optional<double> l1_error(std::span<const float> a, std::span<const float> b, const BinaryMask& region) {
  const std::size_t hw = static_cast<std::size_t>(region.size().height) * region.size().width;
  if (a.size() != b.size() || hw == 0 || a.size() % hw != 0) throw ValidationError("l1_error region mismatch");
  const std::size_t channels = a.size() / hw;
  double sum = 0.0;
  std::size_t count = 0;
  const auto* m = region.data().data();
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t i = 0; i < hw; ++i) {
      if (!m[i]) continue;
      sum += std::abs(static_cast<double>(a[c * hw + i]) - b[c * hw + i]);
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::optional<double> l1_error(const ImageTensor& a, const ImageTensor& b, const BinaryMask& region) {
  check_same(a.size(), b.size());
  check_same(a.size(), region.size());
  return l1_error(a.data(), b.data(), region);
}

std::vector<float> as_floats(const BinaryMask& mask) {
  const std::size_t n = static_cast<std::size_t>(mask.size().height) * mask.size().width;
  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = mask.data()[i] ? 1.0f : 0.0f;
  return out;
}

}  // namespace deocc::evalkit
