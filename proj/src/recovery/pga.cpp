#include "deocc/recovery/pga.hpp"

#include <algorithm>

#include "deocc/core/errors.hpp"

namespace deocc::recovery {

namespace F = torch::nn::functional;

namespace {

torch::nn::Conv2d conv1x1(int in, int out) { return torch::nn::Conv2d(torch::nn::Conv2dOptions(in, out, 1)); }

torch::Tensor fit(const torch::Tensor& x, const torch::Tensor& like) {
  if (x.size(2) == like.size(2) && x.size(3) == like.size(3)) return x;
  return F::interpolate(x, F::InterpolateFuncOptions()
                               .size(std::vector<int64_t>{like.size(2), like.size(3)})
                               .mode(torch::kNearest));
}

}  // namespace

std::string to_string(Assembly a) { return a == Assembly::kFusion ? "fusion" : "cascade"; }

Assembly parse_assembly(const std::string& s) {
  if (s == "fusion") return Assembly::kFusion;
  if (s == "cascade") return Assembly::kCascade;
  throw ValidationError("unknown PGA assembly '" + s + "' (expected fusion or cascade)");
}

torch::Tensor part_channels(const torch::Tensor& parsing) {
  auto keep = torch::ones({1, parsing.size(1), 1, 1}, parsing.options());
  keep.index_put_({0, 0}, 0.0);
  return parsing * keep;
}

PgaModuleImpl::PgaModuleImpl(PgaOptions options) : options_(options) {
  if (options_.channels < 1 || options_.part_count < 2) throw ValidationError("invalid PGA options");
  if (options_.key_channels <= 0) options_.key_channels = std::max(4, options_.channels / 4);
  const int c = options_.channels;
  const int p = options_.part_count;
  reduce_ = register_module("reduce", conv1x1(c, p));
  body_fuse_ = register_module("body_fuse", conv1x1(2 * p, c));
  phi_ = register_module("phi", conv1x1(c + p, options_.key_channels));
  psi_ = register_module("psi", conv1x1(c + p, options_.key_channels));
  const int fused_in = options_.assembly == Assembly::kFusion ? 3 * c : 2 * c;
  out_fuse_ = register_module("out_fuse", conv1x1(fused_in, c));
}

torch::Tensor PgaModuleImpl::body_stream(const torch::Tensor& feature, const torch::Tensor& modal_parsing,
                                         const torch::Tensor& amodal_parsing) {
  const auto reduced = reduce_->forward(feature);
  const auto a = reduced * part_channels(modal_parsing);
  const auto b = reduced * part_channels(amodal_parsing);
  return body_fuse_->forward(torch::cat({a, b}, 1));
}

torch::Tensor PgaModuleImpl::relation_matrix(const torch::Tensor& feature, const torch::Tensor& modal_parsing,
                                             const torch::Tensor& amodal_parsing, const torch::Tensor& visible,
                                             bool raw) {
  const auto n = feature.size(0);
  const auto hw = feature.size(2) * feature.size(3);
  const auto k_vis = phi_->forward(torch::cat({feature, modal_parsing}, 1)) * visible;
  const auto k_amo = psi_->forward(torch::cat({feature, amodal_parsing}, 1)) * (1 - visible);
  const auto flat_vis = k_vis.reshape({n, -1, hw});
  const auto flat_amo = k_amo.reshape({n, -1, hw});
  auto r = torch::bmm(flat_vis.transpose(1, 2), flat_amo);  // [n, p, q]
  return raw ? r : torch::softmax(r, 1);
}

torch::Tensor PgaModuleImpl::relation_stream(const torch::Tensor& feature, const torch::Tensor& modal_parsing,
                                             const torch::Tensor& amodal_parsing, const torch::Tensor& visible) {
  const auto r = relation_matrix(feature, modal_parsing, amodal_parsing, visible);
  const auto n = feature.size(0);
  const auto c = feature.size(1);
  const auto out = torch::bmm(feature.reshape({n, c, -1}), r);
  return out.reshape(feature.sizes());
}

torch::Tensor PgaModuleImpl::forward(const torch::Tensor& feature, const torch::Tensor& modal_parsing,
                                     const torch::Tensor& amodal_parsing, const torch::Tensor& visible) {
  if (feature.dim() != 4 || feature.size(1) != options_.channels) {
    throw ValidationError("PGA feature channel count mismatch");
  }
  if (modal_parsing.size(1) != options_.part_count || amodal_parsing.size(1) != options_.part_count) {
    throw ValidationError("PGA parsing channel count mismatch");
  }
  const auto mp = fit(modal_parsing, feature);
  const auto ap = fit(amodal_parsing, feature);
  const auto mv = fit(visible, feature);
  if (options_.assembly == Assembly::kFusion) {
    const auto body = options_.body_stream ? body_stream(feature, mp, ap) : torch::zeros_like(feature);
    const auto rel = options_.relation_stream ? relation_stream(feature, mp, ap, mv) : torch::zeros_like(feature);
    return out_fuse_->forward(torch::cat({body, rel, feature}, 1));
  }
  auto h = options_.body_stream ? body_stream(feature, mp, ap) : feature;
  if (options_.relation_stream) h = relation_stream(h, mp, ap, mv);
  return out_fuse_->forward(torch::cat({h, feature}, 1));
}

}  // namespace deocc::recovery
