#include "deocc/evalkit/cascade.hpp"

#include "deocc/recovery/compositing.hpp"

namespace deocc::evalkit {

torch::Tensor one_hot_argmax(const torch::Tensor& scores, const torch::Tensor& support) {
  const auto labels = scores.argmax(1, /*keepdim=*/true) * (support > 0.5).to(torch::kLong);
  return torch::zeros_like(scores).scatter_(1, labels, 1.0);
}

CascadeOutput run_cascade(maskcomp::StageOneNet& stage_one, recovery::RecoveryNet* stage_two,
                          const torch::Tensor& occluded, const torch::Tensor& initial_mask, double threshold) {
  torch::NoGradGuard no_grad;
  const bool was_training = stage_one->is_training();
  stage_one->eval();
  const auto s1 = stage_one->forward(occluded, initial_mask);
  if (was_training) stage_one->train();

  CascadeOutput out;
  out.modal_soft = s1.modal.refined;
  out.amodal_soft = s1.amodal.amodal;
  const auto modal_raw = maskcomp::binarize(out.modal_soft, threshold);
  out.amodal = maskcomp::binarize(out.amodal_soft, threshold);
  out.violations = (modal_raw * (1 - out.amodal)).sum().item<double>();
  out.pixels = modal_raw.numel();
  out.modal = modal_raw * out.amodal;
  out.invisible = maskcomp::invisible_mask(out.amodal, out.modal);
  out.modal_parsing = one_hot_argmax(s1.modal.parsing, out.modal);
  out.amodal_parsing = one_hot_argmax(s1.amodal.parsing, out.amodal);

  if (stage_two != nullptr) {
    const bool two_training = (*stage_two)->is_training();
    (*stage_two)->eval();
    out.recovered =
        (*stage_two)->forward(occluded, out.modal, out.amodal, out.modal_parsing, out.amodal_parsing);
    if (two_training) (*stage_two)->train();
    out.composited = recovery::composite(out.recovered, occluded, out.modal);
  }
  return out;
}

}  // namespace deocc::evalkit
