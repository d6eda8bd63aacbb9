#pragma once

#include <torch/torch.h>

namespace deocc::maskcomp {

struct DiscriminatorOptions {
  int in_channels = 1;
  int base_channels = 32;
};

/// Patch discriminator: four 4x4 stride-2 pad-1 convolutions
/// (in -> c -> 2c -> 4c -> 1) with LeakyReLU(0.2) between them.
/// Each layer maps a side s to floor(s/2), so an HxW input yields a
/// floor(H/16) x floor(W/16) grid of logits. Used for both the mask
/// and the image discriminator.
class PatchDiscriminatorImpl : public torch::nn::Module {
 public:
  explicit PatchDiscriminatorImpl(DiscriminatorOptions options);

  torch::Tensor forward(const torch::Tensor& x);           // logits
  torch::Tensor probability(const torch::Tensor& x) { return torch::sigmoid(forward(x)); }

  const DiscriminatorOptions& options() const { return options_; }

 private:
  DiscriminatorOptions options_;
  std::vector<torch::nn::Conv2d> layers_;
};

TORCH_MODULE(PatchDiscriminator);

}  // namespace deocc::maskcomp
