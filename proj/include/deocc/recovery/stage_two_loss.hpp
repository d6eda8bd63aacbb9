#pragma once

#include <torch/torch.h>

#include "deocc/losses/embedding.hpp"
#include "deocc/losses/losses.hpp"

namespace deocc::recovery {

struct Stage2Weights {
  double adv = 0.1;         // β1
  double l1 = 1.0;          // β2
  double perceptual = 1.0;  // β3
  double style = 40.0;      // β4

  void validate() const;
};

struct Stage2Terms {
  torch::Tensor adv;
  torch::Tensor l1;
  torch::Tensor perceptual;
  torch::Tensor style;
  torch::Tensor total;
};

torch::Tensor combine(const Stage2Weights& weights, const torch::Tensor& adv, const torch::Tensor& l1,
                      const torch::Tensor& perceptual, const torch::Tensor& style);

// `d_real` / `d_fake` are image-discriminator probabilities for I_o and Î_o.
Stage2Terms stage_two_loss(const torch::Tensor& recovered, const torch::Tensor& full, const torch::Tensor& d_real,
                           const torch::Tensor& d_fake, const losses::FeatureEmbedding& embedding,
                           const Stage2Weights& weights = {},
                           losses::GeneratorObjective objective = losses::GeneratorObjective::kNonSaturating);

}  // namespace deocc::recovery
