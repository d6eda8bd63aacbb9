#pragma once

#include <torch/torch.h>

#include "deocc/losses/embedding.hpp"

namespace deocc::losses {

// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] inside logs.
inline constexpr double kProbClamp = 1e-7;

// Mean per-pixel binary cross-entropy of probabilities against {0,1} targets.
torch::Tensor binary_cross_entropy(const torch::Tensor& prob, const torch::Tensor& target);

// Mean per-pixel categorical cross-entropy; channel dim 1 holds class
// probabilities (already softmaxed) and one-hot targets.
torch::Tensor categorical_cross_entropy(const torch::Tensor& prob, const torch::Tensor& target);

// Mean absolute difference.
torch::Tensor l1(const torch::Tensor& a, const torch::Tensor& b);

enum class GeneratorObjective {
  kNonSaturating,  // -E[log D(fake)]
  kMinimax,        // E[log(1 - D(fake))] + E[log D(real)], the literal GAN value
};

struct AdversarialLosses {
  torch::Tensor objective;      // E[log D(real)] + E[log(1 - D(fake))]
  torch::Tensor discriminator;  // -objective
  torch::Tensor generator;
};

/// `d_real`, `d_fake` are discriminator probabilities. With both at 0.5
/// the discriminator loss is -(ln 0.5 + ln 0.5) = 2 ln 2.
AdversarialLosses adversarial_pair(const torch::Tensor& d_real, const torch::Tensor& d_fake,
                                   GeneratorObjective objective = GeneratorObjective::kNonSaturating);

// Sum over embedding taps of the mean absolute feature difference.
torch::Tensor perceptual(const torch::Tensor& a, const torch::Tensor& b, const FeatureEmbedding& embedding);

// (N,C,C) Gram matrices F F^T / (C H W).
torch::Tensor gram_matrix(const torch::Tensor& features);

// Sum over embedding taps of the mean absolute Gram difference.
torch::Tensor style(const torch::Tensor& a, const torch::Tensor& b, const FeatureEmbedding& embedding);

}  // namespace deocc::losses
