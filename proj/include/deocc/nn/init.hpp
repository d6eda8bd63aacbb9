#pragma once

#include <torch/torch.h>

#include <cstdint>

namespace deocc::nn {

// Re-initialises every parameter from `seed`: weights U(-b, b) with
// b = sqrt(6 / fan_in), biases zero. Visits parameters in registration
// order, so the result depends only on the architecture and the seed.
void init_fan_in_uniform(torch::nn::Module& module, std::uint64_t seed);

}  // namespace deocc::nn
