#pragma once

#include <torch/torch.h>

#include <span>
#include <vector>

#include "deocc/core/image.hpp"
#include "deocc/datagen/types.hpp"

namespace deocc::nn {

// (3,H,W), (1,H,W) and one-hot (P,H,W) float32 tensors.
torch::Tensor to_tensor(const ImageTensor& image);
torch::Tensor to_tensor(const BinaryMask& mask);
torch::Tensor to_tensor(const ParsingMap& parsing);

// Accept (C,H,W) or (1,C,H,W). Images are clamped to [0,1].
ImageTensor to_image(const torch::Tensor& t);
// Values must already be exactly 0 or 1.
BinaryMask to_mask(const torch::Tensor& t);
// Channel argmax of a (P,H,W) score map; first index wins ties.
ParsingMap argmax_parsing(const torch::Tensor& scores);

/// N samples stacked along dim 0.
struct SampleBatch {
  torch::Tensor occluded;        // (N,3,H,W)
  torch::Tensor full;            // (N,3,H,W)
  torch::Tensor initial;         // (N,1,H,W)
  torch::Tensor modal;           // (N,1,H,W)
  torch::Tensor amodal;          // (N,1,H,W)
  torch::Tensor modal_parsing;   // (N,P,H,W) one-hot
  torch::Tensor amodal_parsing;  // (N,P,H,W) one-hot

  std::int64_t size() const { return occluded.size(0); }
  SampleBatch to(torch::ScalarType dtype) const;
};

SampleBatch make_batch(std::span<const datagen::OcclusionSample> samples,
                       std::span<const std::size_t> indices);
SampleBatch make_batch(std::span<const datagen::OcclusionSample> samples);

}  // namespace deocc::nn
