#pragma once

#include <torch/torch.h>

#include "deocc/core/image.hpp"

namespace deocc::recovery {

inline constexpr double kDefaultBackgroundProportion = 0.3;

// I_s·M_a + I_s·(1 − M_a)·w
torch::Tensor apply_background_proportion(const torch::Tensor& image, const torch::Tensor& amodal, double w);
ImageTensor apply_background_proportion(const ImageTensor& image, const BinaryMask& amodal, double w);

// I_s where M_v = 1, Î_o elsewhere. Selects rather than blends, so the
// visible region is copied bit-exactly.
torch::Tensor composite(const torch::Tensor& recovered, const torch::Tensor& occluded, const torch::Tensor& visible);
ImageTensor composite(const ImageTensor& recovered, const ImageTensor& occluded, const BinaryMask& visible);

// Partial-conv validity at the input: M_v ∨ (1 − M_a) when w > 0, else M_v.
torch::Tensor initial_validity(const torch::Tensor& visible, const torch::Tensor& amodal, double w);

}  // namespace deocc::recovery
