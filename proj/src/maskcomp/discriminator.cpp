#include "deocc/maskcomp/discriminator.hpp"

#include <string>

#include "deocc/core/errors.hpp"

namespace deocc::maskcomp {

PatchDiscriminatorImpl::PatchDiscriminatorImpl(DiscriminatorOptions options) : options_(options) {
  const int c = options_.base_channels;
  const int widths[5] = {options_.in_channels, c, 2 * c, 4 * c, 1};
  for (int i = 0; i < 4; ++i) {
    layers_.push_back(register_module(
        "conv" + std::to_string(i),
        torch::nn::Conv2d(torch::nn::Conv2dOptions(widths[i], widths[i + 1], 4).stride(2).padding(1))));
  }
}

torch::Tensor PatchDiscriminatorImpl::forward(const torch::Tensor& x) {
  if (x.dim() != 4 || x.size(1) != options_.in_channels) {
    throw ValidationError("discriminator expects " + std::to_string(options_.in_channels) + "-channel input");
  }
  if (x.size(2) < 16 || x.size(3) < 16) throw ValidationError("discriminator input must be at least 16x16");
  auto h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    h = layers_[i]->forward(h);
    if (i + 1 < layers_.size()) h = torch::leaky_relu(h, 0.2);
  }
  return h;
}

}  // namespace deocc::maskcomp
