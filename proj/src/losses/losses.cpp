#include "deocc/losses/losses.hpp"

#include "deocc/core/errors.hpp"

namespace deocc::losses {

namespace {

torch::Tensor safe_log(const torch::Tensor& p) { return torch::log(p.clamp(kProbClamp, 1.0 - kProbClamp)); }

void require_same_shape(const torch::Tensor& a, const torch::Tensor& b, const char* what) {
  if (a.sizes() != b.sizes()) throw ValidationError(std::string(what) + ": shape mismatch");
}

}  // namespace

torch::Tensor binary_cross_entropy(const torch::Tensor& prob, const torch::Tensor& target) {
  require_same_shape(prob, target, "binary_cross_entropy");
  return -(target * safe_log(prob) + (1 - target) * safe_log(1 - prob)).mean();
}

torch::Tensor categorical_cross_entropy(const torch::Tensor& prob, const torch::Tensor& target) {
  require_same_shape(prob, target, "categorical_cross_entropy");
  return -(target * safe_log(prob)).sum(1).mean();
}

torch::Tensor l1(const torch::Tensor& a, const torch::Tensor& b) {
  require_same_shape(a, b, "l1");
  return (a - b).abs().mean();
}

AdversarialLosses adversarial_pair(const torch::Tensor& d_real, const torch::Tensor& d_fake,
                                   GeneratorObjective objective) {
  AdversarialLosses out;
  const auto log_real = safe_log(d_real).mean();
  const auto log_not_fake = safe_log(1 - d_fake).mean();
  out.objective = log_real + log_not_fake;
  out.discriminator = -out.objective;
  out.generator = objective == GeneratorObjective::kNonSaturating ? -safe_log(d_fake).mean()
                                                                  : out.objective;
  return out;
}

torch::Tensor perceptual(const torch::Tensor& a, const torch::Tensor& b, const FeatureEmbedding& embedding) {
  require_same_shape(a, b, "perceptual");
  const auto fa = embedding->features(as_three_channels(a));
  const auto fb = embedding->features(as_three_channels(b));
  auto total = torch::zeros({}, a.options());
  for (std::size_t i = 0; i < fa.size(); ++i) total = total + (fa[i] - fb[i]).abs().mean();
  return total;
}

torch::Tensor gram_matrix(const torch::Tensor& f) {
  const auto n = f.size(0);
  const auto c = f.size(1);
  const auto hw = f.size(2) * f.size(3);
  const auto flat = f.reshape({n, c, hw});
  return torch::bmm(flat, flat.transpose(1, 2)) / static_cast<double>(c * hw);
}

torch::Tensor style(const torch::Tensor& a, const torch::Tensor& b, const FeatureEmbedding& embedding) {
  require_same_shape(a, b, "style");
  const auto fa = embedding->features(as_three_channels(a));
  const auto fb = embedding->features(as_three_channels(b));
  auto total = torch::zeros({}, a.options());
  for (std::size_t i = 0; i < fa.size(); ++i) {
    total = total + (gram_matrix(fa[i]) - gram_matrix(fb[i])).abs().mean();
  }
  return total;
}

}  // namespace deocc::losses
