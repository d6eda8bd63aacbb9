#pragma once

#include <torch/torch.h>

#include "deocc/core/image.hpp"

namespace deocc::maskcomp {

inline constexpr double kBinarizeThreshold = 0.5;

// 1 where value >= threshold (ties go to foreground), else 0.
torch::Tensor binarize(const torch::Tensor& soft, double threshold = kBinarizeThreshold);

// amodal ∧ ¬modal, on 0/1 tensors or masks.
torch::Tensor invisible_mask(const torch::Tensor& amodal, const torch::Tensor& modal);
BinaryMask invisible_mask(const BinaryMask& amodal, const BinaryMask& modal);

}  // namespace deocc::maskcomp
