#pragma once

#include <torch/torch.h>

#include "deocc/losses/embedding.hpp"
#include "deocc/losses/losses.hpp"
#include "deocc/maskcomp/stage_one.hpp"

namespace deocc::maskcomp {

struct Stage1Weights {
  double seg = 1.0;  // λ1
  double adv = 1.0;  // λ2
  double gen = 0.1;  // λ3

  void validate() const;  // every coefficient >= 0
};

struct Stage1Targets {
  torch::Tensor modal;           // (N,1,H,W)
  torch::Tensor amodal;          // (N,1,H,W)
  torch::Tensor modal_parsing;   // (N,P,H,W) one-hot
  torch::Tensor amodal_parsing;  // (N,P,H,W) one-hot
};

struct Stage1Terms {
  torch::Tensor ce_modal;
  torch::Tensor ce_amodal;
  torch::Tensor ce_modal_parsing;
  torch::Tensor ce_amodal_parsing;
  torch::Tensor l1;
  torch::Tensor perceptual;

  torch::Tensor seg;  // sum of the four CE terms
  torch::Tensor adv;  // generator-side adversarial term
  torch::Tensor gen;  // l1 + perceptual
  torch::Tensor total;
};

// λ1·seg + λ2·adv + λ3·gen.
torch::Tensor combine(const Stage1Weights& weights, const torch::Tensor& seg, const torch::Tensor& adv,
                      const torch::Tensor& gen);

/// `d_real` / `d_fake` are mask-discriminator probabilities for the ground
/// truth and the soft amodal prediction. `d_real` only enters the minimax
/// objective.
Stage1Terms stage_one_loss(const StageOneOutput& out, const Stage1Targets& targets, const torch::Tensor& d_real,
                           const torch::Tensor& d_fake, const losses::FeatureEmbedding& embedding,
                           const Stage1Weights& weights = {},
                           losses::GeneratorObjective objective = losses::GeneratorObjective::kNonSaturating);

}  // namespace deocc::maskcomp
