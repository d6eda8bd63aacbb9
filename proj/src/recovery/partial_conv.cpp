#include "deocc/recovery/partial_conv.hpp"

#include "deocc/core/errors.hpp"

namespace deocc::recovery {

namespace F = torch::nn::functional;

PartialConvResult partial_conv(const torch::Tensor& x, const torch::Tensor& mask, const torch::Tensor& weight,
                               const torch::Tensor& bias, int stride, int padding) {
  if (x.dim() != 4 || mask.dim() != 4 || mask.size(1) != 1 || x.size(0) != mask.size(0) ||
      x.size(2) != mask.size(2) || x.size(3) != mask.size(3)) {
    throw ValidationError("partial_conv: mask must be (N,1,H,W) aligned with the input");
  }
  const auto kh = weight.size(2);
  const auto kw = weight.size(3);
  const auto ones = torch::ones({1, 1, kh, kw}, mask.options());
  const auto coverage =
      F::conv2d(mask, ones, F::Conv2dFuncOptions().stride(stride).padding(padding)).detach();
  const auto valid = (coverage > 0).to(x.scalar_type());
  const auto scale = valid * static_cast<double>(kh * kw) / coverage.clamp_min(1.0);
  auto out = F::conv2d(x * mask, weight, F::Conv2dFuncOptions().stride(stride).padding(padding)) * scale;
  if (bias.defined()) out = out + bias.view({1, -1, 1, 1}) * valid;
  return {out, valid};
}

PartialConv2dImpl::PartialConv2dImpl(PartialConvOptions options) : options_(options) {
  if (options_.in_channels < 1 || options_.out_channels < 1 || options_.kernel < 1 || options_.stride < 1) {
    throw ValidationError("partial conv options must be positive");
  }
  weight_ = register_parameter(
      "weight", torch::empty({options_.out_channels, options_.in_channels, options_.kernel, options_.kernel}));
  bias_ = register_parameter("bias", torch::zeros({options_.out_channels}));
  const double bound = std::sqrt(6.0 / (options_.in_channels * options_.kernel * options_.kernel));
  torch::NoGradGuard guard;
  weight_.uniform_(-bound, bound);
}

PartialConvResult PartialConv2dImpl::forward(const torch::Tensor& x, const torch::Tensor& mask) {
  return partial_conv(x, mask, weight_, bias_, options_.stride, options_.kernel / 2);
}

}  // namespace deocc::recovery
