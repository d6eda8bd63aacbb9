#include "deocc/maskcomp/hourglass.hpp"

#include <string>

#include "deocc/core/errors.hpp"

namespace deocc::maskcomp {

namespace F = torch::nn::functional;

namespace {

torch::nn::Conv2d conv(int in, int out, int k) {
  return torch::nn::Conv2d(torch::nn::Conv2dOptions(in, out, k).padding(k / 2));
}

}  // namespace

HourglassImpl::HourglassImpl(HourglassOptions options) : options_(options) {
  if (options_.depth < 1) throw ValidationError("hourglass depth must be >= 1");
  if (options_.base_channels < 1 || options_.in_channels < 1) {
    throw ValidationError("hourglass channel counts must be positive");
  }
  if (options_.part_count < 2) throw ValidationError("part_count must be >= 2");
  const int c = options_.base_channels;
  stem_ = register_module("stem", conv(options_.in_channels, c, 3));
  for (int i = 0; i < options_.depth; ++i) {
    skip_.push_back(register_module("skip" + std::to_string(i), conv(c, c, 3)));
    down_.push_back(register_module("down" + std::to_string(i), conv(c, c, 3)));
    post_.push_back(register_module("post" + std::to_string(i), conv(c, c, 3)));
  }
  bottom_ = register_module("bottom", conv(c, c, 3));
  feature_ = register_module("feature", conv(c, c, 3));
  mask_head_ = register_module("mask_head", conv(c, 1, 1));
  parsing_head_ = register_module("parsing_head", conv(c, options_.part_count, 1));
}

torch::Tensor HourglassImpl::level(const torch::Tensor& x, int index) {
  auto up = torch::relu(skip_[index]->forward(x));
  auto low = torch::relu(down_[index]->forward(F::avg_pool2d(x, F::AvgPool2dFuncOptions(2))));
  low = index + 1 < options_.depth ? level(low, index + 1) : torch::relu(bottom_->forward(low));
  low = torch::relu(post_[index]->forward(low));
  low = F::interpolate(low, F::InterpolateFuncOptions()
                                .size(std::vector<int64_t>{x.size(2), x.size(3)})
                                .mode(torch::kNearest));
  return up + low;
}

HourglassOutput HourglassImpl::forward(const torch::Tensor& x) {
  if (x.dim() != 4 || x.size(1) != options_.in_channels) {
    throw ValidationError("hourglass expects (N," + std::to_string(options_.in_channels) + ",H,W) input");
  }
  const auto min_side = std::int64_t{1} << options_.depth;
  if (x.size(2) < min_side || x.size(3) < min_side) {
    throw ValidationError("input too small for hourglass depth " + std::to_string(options_.depth));
  }
  HourglassOutput out;
  auto h = torch::relu(stem_->forward(x));
  out.feature = torch::relu(feature_->forward(level(h, 0)));
  out.mask = torch::sigmoid(mask_head_->forward(out.feature));
  out.parsing = torch::softmax(parsing_head_->forward(out.feature), 1);
  return out;
}

}  // namespace deocc::maskcomp
