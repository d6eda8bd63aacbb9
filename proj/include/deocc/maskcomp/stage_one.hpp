#pragma once

#include <torch/torch.h>

#include "deocc/maskcomp/hourglass.hpp"
#include "deocc/maskcomp/template_bank.hpp"

namespace deocc::maskcomp {

inline constexpr double kAttentionEpsilon = 1e-6;

struct TemplateAttention {
  torch::Tensor distances;  // (N,K) l2 distance to every template
  torch::Tensor weights;    // (N,K) 1 / (distance + eps)
  torch::Tensor feature;    // (N,1,H,W) combined re-weighted templates
};

/// Re-weights the templates by inverse l2 distance to the refined modal
/// map (resized to template resolution) and merges them with a linear
/// 1x1 convolution; the result is resized back to the input resolution.
/// Raw reciprocals, no normalisation across templates.
TemplateAttention template_attention(const torch::Tensor& refined_modal, const torch::Tensor& templates,
                                     torch::nn::Conv2d& combiner, double eps = kAttentionEpsilon);

struct ModalOutput {
  torch::Tensor refined;  // M̂_m, (N,1,H,W) in [0,1]
  torch::Tensor parsing;  // M̂_m^p, (N,P,H,W) softmax
  torch::Tensor feature;  // F_m, (N,c,H,W)
};

struct AmodalOutput {
  torch::Tensor amodal;   // M̂_a
  torch::Tensor parsing;  // M̂_a^p
};

struct StageOneOutput {
  ModalOutput modal;
  TemplateAttention attention;
  AmodalOutput amodal;
};

struct StageOneOptions {
  int part_count = 7;
  int base_channels = 32;
  int depth = 3;
};

/// Stacked mask-completion network: a modal hourglass refines the initial
/// mask from (image ⊕ initial mask); a second hourglass completes the
/// amodal mask from (F_m ⊕ M̂_m ⊕ template feature). The template bank is
/// a frozen buffer.
class StageOneNetImpl : public torch::nn::Module {
 public:
  StageOneNetImpl(StageOneOptions options, const TemplateBank& bank);

  ModalOutput modal_forward(const torch::Tensor& occluded, const torch::Tensor& initial_mask);
  TemplateAttention attend(const torch::Tensor& refined_modal);
  AmodalOutput amodal_forward(const torch::Tensor& feature, const torch::Tensor& refined_modal,
                              const torch::Tensor& template_feature);
  StageOneOutput forward(const torch::Tensor& occluded, const torch::Tensor& initial_mask);

  const StageOneOptions& options() const { return options_; }
  const torch::Tensor& templates() const { return templates_; }
  Hourglass& modal_hourglass() { return modal_hg_; }
  Hourglass& amodal_hourglass() { return amodal_hg_; }
  torch::nn::Conv2d& template_combiner() { return combiner_; }

 private:
  StageOneOptions options_;
  Hourglass modal_hg_{nullptr};
  Hourglass amodal_hg_{nullptr};
  torch::nn::Conv2d combiner_{nullptr};
  torch::Tensor templates_;  // (K,h,w)
};

TORCH_MODULE(StageOneNet);

// Template bank as a (K,h,w) float tensor.
torch::Tensor templates_tensor(const TemplateBank& bank);

}  // namespace deocc::maskcomp
