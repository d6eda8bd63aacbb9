#include "deocc/maskcomp/stage_one.hpp"

#include "deocc/core/errors.hpp"

namespace deocc::maskcomp {

namespace F = torch::nn::functional;

namespace {

torch::Tensor resize_nearest(const torch::Tensor& x, std::int64_t h, std::int64_t w) {
  if (x.size(2) == h && x.size(3) == w) return x;
  return F::interpolate(x, F::InterpolateFuncOptions().size(std::vector<int64_t>{h, w}).mode(torch::kNearest));
}

void require_aligned(const torch::Tensor& a, const torch::Tensor& b, const char* what) {
  if (a.dim() != 4 || b.dim() != 4 || a.size(0) != b.size(0) || a.size(2) != b.size(2) ||
      a.size(3) != b.size(3)) {
    throw ValidationError(std::string(what) + ": inputs are not spatially aligned");
  }
}

}  // namespace

torch::Tensor templates_tensor(const TemplateBank& bank) {
  bank.validate();
  auto t = torch::empty({bank.count, bank.resolution.height, bank.resolution.width}, torch::kFloat32);
  std::copy(bank.templates.begin(), bank.templates.end(), t.data_ptr<float>());
  return t;
}

TemplateAttention template_attention(const torch::Tensor& refined, const torch::Tensor& templates,
                                     torch::nn::Conv2d& combiner, double eps) {
  if (templates.dim() != 3 || templates.size(0) < 1) throw ValidationError("template bank is empty");
  const auto k = templates.size(0);
  const auto n = refined.size(0);
  auto t = templates.to(refined.scalar_type());
  auto resized = resize_nearest(refined, t.size(1), t.size(2));  // (N,1,h,w)
  auto diff = resized - t.unsqueeze(0);                           // (N,K,h,w)
  // The floor keeps the square root differentiable at an exact match.
  TemplateAttention out;
  out.distances = torch::sqrt(diff.pow(2).sum({2, 3}).clamp_min(1e-24));
  out.weights = 1.0 / (out.distances + eps);
  auto weighted = t.unsqueeze(0) * out.weights.view({n, k, 1, 1});
  out.feature = resize_nearest(combiner->forward(weighted), refined.size(2), refined.size(3));
  return out;
}

StageOneNetImpl::StageOneNetImpl(StageOneOptions options, const TemplateBank& bank) : options_(options) {
  modal_hg_ = register_module(
      "modal_hg", Hourglass(HourglassOptions{4, options_.base_channels, options_.depth, options_.part_count}));
  amodal_hg_ = register_module(
      "amodal_hg",
      Hourglass(HourglassOptions{options_.base_channels + 2, options_.base_channels, options_.depth,
                                 options_.part_count}));
  combiner_ = register_module("template_combiner", torch::nn::Conv2d(torch::nn::Conv2dOptions(bank.count, 1, 1)));
  templates_ = register_buffer("templates", templates_tensor(bank));
}

ModalOutput StageOneNetImpl::modal_forward(const torch::Tensor& occluded, const torch::Tensor& initial_mask) {
  require_aligned(occluded, initial_mask, "modal_forward");
  auto hg = modal_hg_->forward(torch::cat({occluded, initial_mask}, 1));
  return {hg.mask, hg.parsing, hg.feature};
}

TemplateAttention StageOneNetImpl::attend(const torch::Tensor& refined_modal) {
  return template_attention(refined_modal, templates_, combiner_);
}

AmodalOutput StageOneNetImpl::amodal_forward(const torch::Tensor& feature, const torch::Tensor& refined_modal,
                                             const torch::Tensor& template_feature) {
  require_aligned(feature, refined_modal, "amodal_forward");
  require_aligned(feature, template_feature, "amodal_forward");
  auto hg = amodal_hg_->forward(torch::cat({feature, refined_modal, template_feature}, 1));
  return {hg.mask, hg.parsing};
}

StageOneOutput StageOneNetImpl::forward(const torch::Tensor& occluded, const torch::Tensor& initial_mask) {
  StageOneOutput out;
  out.modal = modal_forward(occluded, initial_mask);
  out.attention = attend(out.modal.refined);
  out.amodal = amodal_forward(out.modal.feature, out.modal.refined, out.attention.feature);
  return out;
}

}  // namespace deocc::maskcomp
