#include "deocc/nn/convert.hpp"

#include <numeric>

#include "deocc/core/errors.hpp"

namespace deocc::nn {

namespace {

torch::Tensor drop_batch(const torch::Tensor& t) {
  if (t.dim() == 4) {
    if (t.size(0) != 1) throw ValidationError("expected a single-item batch");
    return t[0];
  }
  return t;
}

}  // namespace

torch::Tensor to_tensor(const ImageTensor& image) {
  auto t = torch::empty({3, image.height(), image.width()}, torch::kFloat32);
  std::copy(image.data().begin(), image.data().end(), t.data_ptr<float>());
  return t;
}

torch::Tensor to_tensor(const BinaryMask& mask) {
  auto t = torch::empty({1, mask.height(), mask.width()}, torch::kFloat32);
  std::transform(mask.data().begin(), mask.data().end(), t.data_ptr<float>(),
                 [](std::uint8_t v) { return static_cast<float>(v); });
  return t;
}

torch::Tensor to_tensor(const ParsingMap& parsing) {
  const auto hot = parsing.one_hot();
  auto t = torch::empty({parsing.part_count(), parsing.height(), parsing.width()}, torch::kFloat32);
  std::copy(hot.begin(), hot.end(), t.data_ptr<float>());
  return t;
}

ImageTensor to_image(const torch::Tensor& input) {
  auto t = drop_batch(input).detach().to(torch::kFloat32).clamp(0.0, 1.0).contiguous();
  if (t.dim() != 3 || t.size(0) != 3) throw ValidationError("expected a (3,H,W) image tensor");
  ImageTensor image({static_cast<int>(t.size(1)), static_cast<int>(t.size(2))});
  std::copy(t.data_ptr<float>(), t.data_ptr<float>() + t.numel(), image.data().begin());
  return image;
}

BinaryMask to_mask(const torch::Tensor& input) {
  auto t = drop_batch(input).detach().to(torch::kFloat32).contiguous();
  if (t.dim() == 3) {
    if (t.size(0) != 1) throw ValidationError("expected a single-channel mask tensor");
    t = t[0];
  }
  BinaryMask mask({static_cast<int>(t.size(0)), static_cast<int>(t.size(1))});
  const float* p = t.data_ptr<float>();
  for (std::size_t i = 0; i < mask.data().size(); ++i) {
    if (p[i] != 0.0f && p[i] != 1.0f) throw ValidationError("mask tensor is not binary");
    mask.data()[i] = p[i] != 0.0f ? 1 : 0;
  }
  return mask;
}

ParsingMap argmax_parsing(const torch::Tensor& input) {
  auto t = drop_batch(input).detach();
  if (t.dim() != 3) throw ValidationError("expected a (P,H,W) parsing tensor");
  auto labels = t.argmax(0).to(torch::kUInt8).contiguous();
  ParsingMap parsing({static_cast<int>(t.size(1)), static_cast<int>(t.size(2))},
                     static_cast<int>(t.size(0)));
  std::copy(labels.data_ptr<std::uint8_t>(), labels.data_ptr<std::uint8_t>() + labels.numel(),
            parsing.labels().begin());
  return parsing;
}

SampleBatch SampleBatch::to(torch::ScalarType dtype) const {
  return {occluded.to(dtype), full.to(dtype),         initial.to(dtype),       modal.to(dtype),
          amodal.to(dtype),   modal_parsing.to(dtype), amodal_parsing.to(dtype)};
}

SampleBatch make_batch(std::span<const datagen::OcclusionSample> samples,
                       std::span<const std::size_t> indices) {
  if (indices.empty()) throw ValidationError("empty batch");
  std::vector<torch::Tensor> occ, full, init, modal, amodal, mp, ap;
  for (auto i : indices) {
    const auto& s = samples[i];
    occ.push_back(to_tensor(s.occluded_image));
    full.push_back(to_tensor(s.full_image));
    init.push_back(to_tensor(s.initial_mask));
    modal.push_back(to_tensor(s.modal_mask));
    amodal.push_back(to_tensor(s.amodal_mask));
    mp.push_back(to_tensor(s.modal_parsing));
    ap.push_back(to_tensor(s.amodal_parsing));
  }
  return {torch::stack(occ),    torch::stack(full), torch::stack(init), torch::stack(modal),
          torch::stack(amodal), torch::stack(mp),   torch::stack(ap)};
}

SampleBatch make_batch(std::span<const datagen::OcclusionSample> samples) {
  std::vector<std::size_t> all(samples.size());
  std::iota(all.begin(), all.end(), 0);
  return make_batch(samples, all);
}

}  // namespace deocc::nn
