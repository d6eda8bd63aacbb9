#include "deocc/recovery/stage_two_loss.hpp"

#include <cmath>

#include "deocc/core/errors.hpp"

namespace deocc::recovery {

void Stage2Weights::validate() const {
  for (double v : {adv, l1, perceptual, style}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("stage-2 loss coefficients must be finite and >= 0");
  }
}

torch::Tensor combine(const Stage2Weights& w, const torch::Tensor& adv, const torch::Tensor& l1,
                      const torch::Tensor& perceptual, const torch::Tensor& style) {
  return w.adv * adv + w.l1 * l1 + w.perceptual * perceptual + w.style * style;
}

Stage2Terms stage_two_loss(const torch::Tensor& recovered, const torch::Tensor& full, const torch::Tensor& d_real,
                           const torch::Tensor& d_fake, const losses::FeatureEmbedding& embedding,
                           const Stage2Weights& weights, losses::GeneratorObjective objective) {
  weights.validate();
  Stage2Terms t;
  t.adv = losses::adversarial_pair(d_real, d_fake, objective).generator;
  t.l1 = losses::l1(recovered, full);
  t.perceptual = losses::perceptual(recovered, full, embedding);
  t.style = losses::style(recovered, full, embedding);
  t.total = combine(weights, t.adv, t.l1, t.perceptual, t.style);
  return t;
}

}  // namespace deocc::recovery
