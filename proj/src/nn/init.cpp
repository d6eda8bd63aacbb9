#include "deocc/nn/init.hpp"

#include <cmath>
#include <random>

#include "deocc/core/rng.hpp"

namespace deocc::nn {

void init_fan_in_uniform(torch::nn::Module& module, std::uint64_t seed) {
  torch::NoGradGuard no_grad;
  Rng rng(seed);
  for (auto& item : module.named_parameters(/*recurse=*/true)) {
    auto& p = item.value();
    if (p.dim() < 2) {
      p.zero_();
      continue;
    }
    const double fan_in = static_cast<double>(p.numel() / p.size(0));
    const double bound = std::sqrt(6.0 / fan_in);
    auto values = torch::empty({p.numel()}, torch::kFloat64);
    auto* v = values.data_ptr<double>();
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (std::int64_t i = 0; i < values.numel(); ++i) v[i] = dist(rng);
    p.copy_(values.view(p.sizes()));
  }
}

}  // namespace deocc::nn
