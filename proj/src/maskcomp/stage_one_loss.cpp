#include "deocc/maskcomp/stage_one_loss.hpp"

#include <cmath>

#include "deocc/core/errors.hpp"

namespace deocc::maskcomp {

void Stage1Weights::validate() const {
  for (double v : {seg, adv, gen}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("stage-1 loss coefficients must be finite and >= 0");
  }
}

torch::Tensor combine(const Stage1Weights& w, const torch::Tensor& seg, const torch::Tensor& adv,
                      const torch::Tensor& gen) {
  return w.seg * seg + w.adv * adv + w.gen * gen;
}

Stage1Terms stage_one_loss(const StageOneOutput& out, const Stage1Targets& t, const torch::Tensor& d_real,
                           const torch::Tensor& d_fake, const losses::FeatureEmbedding& embedding,
                           const Stage1Weights& weights, losses::GeneratorObjective objective) {
  weights.validate();
  Stage1Terms r;
  r.ce_modal = losses::binary_cross_entropy(out.modal.refined, t.modal);
  r.ce_amodal = losses::binary_cross_entropy(out.amodal.amodal, t.amodal);
  r.ce_modal_parsing = losses::categorical_cross_entropy(out.modal.parsing, t.modal_parsing);
  r.ce_amodal_parsing = losses::categorical_cross_entropy(out.amodal.parsing, t.amodal_parsing);
  r.seg = r.ce_modal + r.ce_amodal + r.ce_modal_parsing + r.ce_amodal_parsing;
  r.adv = losses::adversarial_pair(d_real, d_fake, objective).generator;
  r.l1 = losses::l1(out.amodal.amodal, t.amodal);
  r.perceptual = losses::perceptual(out.amodal.amodal, t.amodal, embedding);
  r.gen = r.l1 + r.perceptual;
  r.total = combine(weights, r.seg, r.adv, r.gen);
  return r;
}

}  // namespace deocc::maskcomp
