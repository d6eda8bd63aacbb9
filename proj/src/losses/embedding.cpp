#include "deocc/losses/embedding.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "deocc/core/errors.hpp"
#include "deocc/core/rng.hpp"

namespace deocc::losses {

FeatureEmbeddingImpl::FeatureEmbeddingImpl(EmbeddingOptions options) : options_(std::move(options)) {
  if (options_.channels.empty()) throw ValidationError("embedding needs at least one layer");
  Rng rng(options_.seed);
  int in = 3;
  for (std::size_t i = 0; i < options_.channels.size(); ++i) {
    const int out = options_.channels[i];
    const double bound = std::sqrt(6.0 / (in * 16));
    std::uniform_real_distribution<double> dist(-bound, bound);
    auto w = torch::empty({out, in, 4, 4}, torch::kFloat64);
    auto* p = w.data_ptr<double>();
    for (std::int64_t k = 0; k < w.numel(); ++k) p[k] = dist(rng);
    weights_.push_back(register_buffer("conv" + std::to_string(i), w.to(torch::kFloat32)));
    in = out;
  }
}

std::vector<torch::Tensor> FeatureEmbeddingImpl::features(const torch::Tensor& x) const {
  if (x.dim() != 4 || x.size(1) != 3) throw ValidationError("embedding expects (N,3,H,W) input");
  std::vector<torch::Tensor> taps;
  auto h = x - 0.5;
  for (const auto& w : weights_) {
    h = torch::relu(torch::conv2d(h, w.to(x.scalar_type()), {}, 2, 1));
    taps.push_back(h);
  }
  return taps;
}

torch::Tensor FeatureEmbeddingImpl::pooled(const torch::Tensor& x) const {
  std::vector<torch::Tensor> parts;
  for (const auto& f : features(x)) parts.push_back(f.mean({2, 3}));
  return torch::cat(parts, 1);
}

int FeatureEmbeddingImpl::feature_dim() const {
  return std::accumulate(options_.channels.begin(), options_.channels.end(), 0);
}

torch::Tensor as_three_channels(const torch::Tensor& x) {
  if (x.size(1) == 3) return x;
  if (x.size(1) != 1) throw ValidationError("expected a 1- or 3-channel map");
  return x.expand({x.size(0), 3, x.size(2), x.size(3)});
}

}  // namespace deocc::losses
