#pragma once

#include <torch/torch.h>

#include "deocc/maskcomp/mask_ops.hpp"
#include "deocc/maskcomp/stage_one.hpp"
#include "deocc/recovery/recovery_net.hpp"

namespace deocc::evalkit {

/// Everything the two-stage cascade produces for a batch. Masks are
/// (N,1,H,W) 0/1 floats, parsing maps one-hot (N,P,H,W).
struct CascadeOutput {
  torch::Tensor modal_soft;
  torch::Tensor amodal_soft;
  torch::Tensor modal;           // binarized M̂_m after intersection with M̂_a
  torch::Tensor amodal;          // binarized M̂_a
  torch::Tensor invisible;       // M̂_a ∧ ¬M̂_m
  torch::Tensor modal_parsing;   // argmax one-hot, background outside M̂_m
  torch::Tensor amodal_parsing;  // argmax one-hot, background outside M̂_a
  torch::Tensor recovered;       // Î_o, undefined without a stage-2 net
  torch::Tensor composited;      // I_s on M̂_m, Î_o elsewhere
  std::int64_t violations = 0;   // pixels with binarized M̂_m = 1, M̂_a = 0 before intersection
  std::int64_t pixels = 0;
};

// One-hot of the channel argmax, forced to background where `support` is 0.
torch::Tensor one_hot_argmax(const torch::Tensor& scores, const torch::Tensor& support);

/// Stage 1 → binarize → intersect → invisible mask → stage 2 → composite.
/// Runs without autograd; `stage_two` may be null to stop after stage 1.
CascadeOutput run_cascade(maskcomp::StageOneNet& stage_one, recovery::RecoveryNet* stage_two,
                          const torch::Tensor& occluded, const torch::Tensor& initial_mask,
                          double threshold = maskcomp::kBinarizeThreshold);

}  // namespace deocc::evalkit
