#include "deocc/recovery/recovery_net.hpp"

#include <string>

#include "deocc/core/errors.hpp"

namespace deocc::recovery {

namespace F = torch::nn::functional;

namespace {

constexpr int kInputChannels = 5;
constexpr int kLevels = 5;

torch::Tensor upsample_to(const torch::Tensor& x, const torch::Tensor& like) {
  return F::interpolate(x, F::InterpolateFuncOptions()
                               .size(std::vector<int64_t>{like.size(2), like.size(3)})
                               .mode(torch::kNearest));
}

}  // namespace

void RecoveryOptions::validate() const {
  if (part_count < 2) throw ValidationError("part_count must be >= 2");
  if (base_channels < 1) throw ValidationError("recovery base_channels must be >= 1");
  if (pga_scales < 0 || pga_scales > kLevels) throw ValidationError("pga_scales must lie in [0,5]");
  if (max_relation_pixels < 1) throw ValidationError("max_relation_pixels must be >= 1");
  if (!(background_w >= 0.0 && background_w <= 1.0)) throw ValidationError("background proportion w must lie in [0,1]");
}

RecoveryNetImpl::RecoveryNetImpl(RecoveryOptions options) : options_(options) {
  options_.validate();
  const int c = options_.base_channels;
  const std::vector<int> enc_ch{c, 2 * c, 4 * c, 4 * c, 4 * c};
  int in = kInputChannels;
  for (int i = 0; i < kLevels; ++i) {
    encoder_.push_back(register_module("enc" + std::to_string(i),
                                       PartialConv2d(PartialConvOptions{in, enc_ch[i], 3, 2})));
    in = enc_ch[i];
  }
  // Decoder steps run coarse to fine: skips e3, e2, e1, e0, then the input.
  int running = enc_ch[kLevels - 1];
  for (int step = 0; step < kLevels; ++step) {
    const int skip_index = kLevels - 2 - step;
    const int skip_ch = skip_index >= 0 ? enc_ch[skip_index] : kInputChannels;
    const int out_ch = skip_index >= 0 ? enc_ch[skip_index] : c;
    decoder_.push_back(register_module("dec" + std::to_string(step),
                                       PartialConv2d(PartialConvOptions{running + skip_ch, out_ch, 3, 1})));
    if (step < options_.pga_scales) {
      PgaOptions po;
      po.channels = out_ch;
      po.part_count = options_.part_count;
      po.assembly = options_.assembly;
      po.body_stream = options_.body_stream;
      po.relation_stream = options_.relation_stream;
      pga_.push_back(register_module("pga" + std::to_string(step), PgaModule(po)));
    }
    running = out_ch;
  }
  head_ = register_module("head", torch::nn::Conv2d(torch::nn::Conv2dOptions(running, 3, 1)));
}

torch::Tensor RecoveryNetImpl::forward(const torch::Tensor& occluded, const torch::Tensor& visible,
                                       const torch::Tensor& amodal, const torch::Tensor& modal_parsing,
                                       const torch::Tensor& amodal_parsing) {
  if (occluded.dim() != 4 || occluded.size(1) != 3) throw ValidationError("recovery expects (N,3,H,W) images");
  for (const auto* t : {&visible, &amodal, &modal_parsing, &amodal_parsing}) {
    if (t->dim() != 4 || t->size(0) != occluded.size(0) || t->size(2) != occluded.size(2) ||
        t->size(3) != occluded.size(3)) {
      throw ValidationError("recovery inputs are not spatially aligned");
    }
  }
  if (visible.size(1) != 1 || amodal.size(1) != 1) throw ValidationError("recovery masks must be 1-channel");
  if (modal_parsing.size(1) != options_.part_count || amodal_parsing.size(1) != options_.part_count) {
    throw ValidationError("recovery parsing channel count mismatch");
  }

  const auto x = torch::cat(
      {apply_background_proportion(occluded, amodal, options_.background_w), visible, amodal}, 1);
  const auto m = initial_validity(visible, amodal, options_.background_w);

  std::vector<torch::Tensor> feats{x};
  std::vector<torch::Tensor> masks{m};
  for (auto& enc : encoder_) {
    auto r = enc->forward(feats.back(), masks.back());
    feats.push_back(torch::relu(r.output));
    masks.push_back(r.mask);
  }

  last_pga_ = 0;
  auto h = feats.back();
  auto hm = masks.back();
  for (int step = 0; step < kLevels; ++step) {
    const auto& skip = feats[kLevels - 1 - step];
    const auto& skip_mask = masks[kLevels - 1 - step];
    const auto up = upsample_to(h, skip);
    const auto up_mask = torch::maximum(upsample_to(hm, skip_mask), skip_mask);
    auto r = decoder_[step]->forward(torch::cat({up, skip}, 1), up_mask);
    h = F::leaky_relu(r.output, F::LeakyReLUFuncOptions().negative_slope(0.2));
    hm = r.mask;
    if (step < static_cast<int>(pga_.size()) && h.size(2) * h.size(3) <= options_.max_relation_pixels) {
      h = pga_[step]->forward(h, modal_parsing, amodal_parsing, visible);
      ++last_pga_;
    }
  }
  return torch::sigmoid(head_->forward(h));
}

}  // namespace deocc::recovery
