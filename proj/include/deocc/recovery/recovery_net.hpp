#pragma once

#include <torch/torch.h>

#include <vector>

#include "deocc/recovery/compositing.hpp"
#include "deocc/recovery/partial_conv.hpp"
#include "deocc/recovery/pga.hpp"

namespace deocc::recovery {

struct RecoveryOptions {
  int part_count = 7;
  int base_channels = 32;
  int pga_scales = 3;                // coarsest decoder scales that get a PGA
  int max_relation_pixels = 4096;    // PGA is skipped where H·W exceeds this
  Assembly assembly = Assembly::kFusion;
  bool body_stream = true;
  bool relation_stream = true;
  double background_w = kDefaultBackgroundProportion;

  void validate() const;
};

/// Partial-convolution U-Net. Input is I_s' ⊕ M_v ⊕ M_a (5 channels).
///
/// Encoder: five 3x3 stride-2 partial convs with channels
/// [c, 2c, 4c, 4c, 4c] and ReLU. Decoder: at each step the running feature
/// and its mask are upsampled (nearest) to the next skip, concatenated with
/// it (mask = union) and passed through a 3x3 partial conv with
/// LeakyReLU(0.2); the last step joins the raw input. PGA follows the
/// first `pga_scales` decoder steps. A 1x1 conv and a sigmoid produce Î_o.
class RecoveryNetImpl : public torch::nn::Module {
 public:
  explicit RecoveryNetImpl(RecoveryOptions options);

  torch::Tensor forward(const torch::Tensor& occluded, const torch::Tensor& visible, const torch::Tensor& amodal,
                        const torch::Tensor& modal_parsing, const torch::Tensor& amodal_parsing);

  const RecoveryOptions& options() const { return options_; }
  // Number of decoder steps a PGA ran on in the most recent forward.
  int last_pga_applications() const { return last_pga_; }

 private:
  RecoveryOptions options_;
  std::vector<PartialConv2d> encoder_;
  std::vector<PartialConv2d> decoder_;
  std::vector<PgaModule> pga_;
  torch::nn::Conv2d head_{nullptr};
  int last_pga_ = 0;
};

TORCH_MODULE(RecoveryNet);

}  // namespace deocc::recovery
