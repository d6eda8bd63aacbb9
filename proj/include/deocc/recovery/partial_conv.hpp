#pragma once

#include <torch/torch.h>

#include <utility>

namespace deocc::recovery {

struct PartialConvResult {
  torch::Tensor output;  // (N,Cout,H',W')
  torch::Tensor mask;    // (N,1,H',W') in {0,1}
};

/// Mask-renormalised convolution. `mask` is a single-channel (N,1,H,W)
/// validity map shared by all input channels. Per output window:
///   out = W^T (X ⊙ M) · |window| / ΣM + b   if ΣM > 0, else 0
///   mask' = [ΣM > 0]
/// where |window| = k·k and padded positions count as invalid.
PartialConvResult partial_conv(const torch::Tensor& x, const torch::Tensor& mask, const torch::Tensor& weight,
                               const torch::Tensor& bias, int stride, int padding);

struct PartialConvOptions {
  int in_channels = 1;
  int out_channels = 1;
  int kernel = 3;
  int stride = 1;
};

class PartialConv2dImpl : public torch::nn::Module {
 public:
  explicit PartialConv2dImpl(PartialConvOptions options);

  PartialConvResult forward(const torch::Tensor& x, const torch::Tensor& mask);

  torch::Tensor& weight() { return weight_; }
  torch::Tensor& bias() { return bias_; }
  const PartialConvOptions& options() const { return options_; }

 private:
  PartialConvOptions options_;
  torch::Tensor weight_;
  torch::Tensor bias_;
};

TORCH_MODULE(PartialConv2d);

}  // namespace deocc::recovery
