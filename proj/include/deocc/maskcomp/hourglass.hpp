#pragma once

#include <torch/torch.h>

namespace deocc::maskcomp {

struct HourglassOptions {
  int in_channels = 4;
  int base_channels = 32;
  int depth = 3;
  int part_count = 7;
};

struct HourglassOutput {
  torch::Tensor feature;  // (N,c,H,W), input to the heads
  torch::Tensor mask;     // (N,1,H,W) sigmoid
  torch::Tensor parsing;  // (N,P,H,W) channel softmax
};

/// Single hourglass with a 1-channel mask head and a P-channel parsing head.
///
/// stem 3x3 -> recursive level (skip 3x3 branch + [2x2 avg-pool, 3x3,
/// inner level or bottom 3x3, 3x3, nearest upsample], summed) -> 3x3
/// feature conv -> 1x1 heads. All hidden convs use ReLU.
class HourglassImpl : public torch::nn::Module {
 public:
  explicit HourglassImpl(HourglassOptions options);

  HourglassOutput forward(const torch::Tensor& x);

  const HourglassOptions& options() const { return options_; }
  torch::nn::Conv2d& mask_head() { return mask_head_; }

 private:
  torch::Tensor level(const torch::Tensor& x, int index);

  HourglassOptions options_;
  torch::nn::Conv2d stem_{nullptr};
  std::vector<torch::nn::Conv2d> skip_;
  std::vector<torch::nn::Conv2d> down_;
  std::vector<torch::nn::Conv2d> post_;
  torch::nn::Conv2d bottom_{nullptr};
  torch::nn::Conv2d feature_{nullptr};
  torch::nn::Conv2d mask_head_{nullptr};
  torch::nn::Conv2d parsing_head_{nullptr};
};

TORCH_MODULE(Hourglass);

}  // namespace deocc::maskcomp
