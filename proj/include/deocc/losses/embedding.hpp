#pragma once

#include <torch/torch.h>

#include <cstdint>
#include <vector>

namespace deocc::losses {

struct EmbeddingOptions {
  std::uint64_t seed = 0;
  std::vector<int> channels{8, 16, 32};
};

/// Frozen random-weight feature extractor shared by the perceptual loss,
/// the style loss and the Fréchet features.
///
/// Each layer is a bias-free 4x4 stride-2 convolution followed by ReLU;
/// every layer output is a tap. Inputs are 3-channel maps in [0,1],
/// centred to [-0.5, 0.5] before the first layer. Weights live in buffers,
/// never in parameters, so no optimizer can touch them.
class FeatureEmbeddingImpl : public torch::nn::Module {
 public:
  explicit FeatureEmbeddingImpl(EmbeddingOptions options = {});

  std::vector<torch::Tensor> features(const torch::Tensor& x) const;

  // Spatial mean of every tap, concatenated: (N, sum(channels)).
  torch::Tensor pooled(const torch::Tensor& x) const;

  const EmbeddingOptions& options() const { return options_; }
  int feature_dim() const;

 private:
  EmbeddingOptions options_;
  std::vector<torch::Tensor> weights_;
};

TORCH_MODULE(FeatureEmbedding);

// Repeats a 1-channel map to 3 channels; 3-channel input passes through.
torch::Tensor as_three_channels(const torch::Tensor& x);

}  // namespace deocc::losses
