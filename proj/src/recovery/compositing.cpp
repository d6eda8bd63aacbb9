#include "deocc/recovery/compositing.hpp"

#include "deocc/core/errors.hpp"

namespace deocc::recovery {

namespace {

void check_w(double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw ValidationError("background proportion w must lie in [0,1]");
}

void check_size(Size2 a, Size2 b) {
  if (a.height != b.height || a.width != b.width) throw ValidationError("image and mask sizes differ");
}

}  // namespace

torch::Tensor apply_background_proportion(const torch::Tensor& image, const torch::Tensor& amodal, double w) {
  check_w(w);
  return image * amodal + image * (1 - amodal) * w;
}

ImageTensor apply_background_proportion(const ImageTensor& image, const BinaryMask& amodal, double w) {
  check_w(w);
  check_size(image.size(), amodal.size());
  ImageTensor out = image;
  const float scale = static_cast<float>(w);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < image.size().height; ++y) {
      for (int x = 0; x < image.size().width; ++x) {
        if (!amodal.at(y, x)) out.at(c, y, x) = image.at(c, y, x) * scale;
      }
    }
  }
  return out;
}

torch::Tensor composite(const torch::Tensor& recovered, const torch::Tensor& occluded, const torch::Tensor& visible) {
  return torch::where(visible.expand_as(occluded) > 0.5, occluded, recovered);
}

ImageTensor composite(const ImageTensor& recovered, const ImageTensor& occluded, const BinaryMask& visible) {
  check_size(recovered.size(), occluded.size());
  check_size(recovered.size(), visible.size());
  ImageTensor out = recovered;
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < out.size().height; ++y) {
      for (int x = 0; x < out.size().width; ++x) {
        if (visible.at(y, x)) out.at(c, y, x) = occluded.at(c, y, x);
      }
    }
  }
  return out;
}

torch::Tensor initial_validity(const torch::Tensor& visible, const torch::Tensor& amodal, double w) {
  check_w(w);
  if (w > 0.0) return torch::maximum(visible, 1 - amodal);
  return visible.clone();
}

}  // namespace deocc::recovery
