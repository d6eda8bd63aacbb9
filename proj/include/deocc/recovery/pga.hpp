#pragma once

#include <torch/torch.h>

#include <string>

namespace deocc::recovery {

enum class Assembly { kFusion, kCascade };

std::string to_string(Assembly a);
Assembly parse_assembly(const std::string& s);  // "fusion" | "cascade"

struct PgaOptions {
  int channels = 32;    // C of the incoming feature
  int part_count = 7;   // P
  int key_channels = 0; // φ/ψ output width; 0 picks max(4, C/4)
  Assembly assembly = Assembly::kFusion;
  bool body_stream = true;
  bool relation_stream = true;
};

/// Parsing Guided Attention.
///
/// Body stream: F is reduced to P channels, multiplied by the part
/// channels of each parsing map (the background channel is zeroed), the
/// two products are concatenated and fused by a 1x1 conv back to C.
///
/// Relation stream: K_vis = φ(F ⊕ M_m^p), K_amo = ψ(F ⊕ M_a^p),
/// R̃ = (M_v ⊙ K_vis)^T ((1 − M_v) ⊙ K_amo), R = softmax over the first
/// pixel index, and the output is F·R (every column q aggregates F).
///
/// Fusion: 1x1 conv over cat(body, relation, F). Cascade: the body output
/// feeds the relation stream, then a 1x1 conv over cat(relation, F).
/// A disabled stream contributes zeros (fusion) or is skipped (cascade).
class PgaModuleImpl : public torch::nn::Module {
 public:
  explicit PgaModuleImpl(PgaOptions options);

  torch::Tensor body_stream(const torch::Tensor& feature, const torch::Tensor& modal_parsing,
                            const torch::Tensor& amodal_parsing);
  // (N,HW,HW) before (`raw`) or after the softmax.
  torch::Tensor relation_matrix(const torch::Tensor& feature, const torch::Tensor& modal_parsing,
                                const torch::Tensor& amodal_parsing, const torch::Tensor& visible,
                                bool raw = false);
  torch::Tensor relation_stream(const torch::Tensor& feature, const torch::Tensor& modal_parsing,
                                const torch::Tensor& amodal_parsing, const torch::Tensor& visible);

  // Parsing maps and the visible mask are resized (nearest) to the feature.
  torch::Tensor forward(const torch::Tensor& feature, const torch::Tensor& modal_parsing,
                        const torch::Tensor& amodal_parsing, const torch::Tensor& visible);

  const PgaOptions& options() const { return options_; }

 private:
  PgaOptions options_;
  torch::nn::Conv2d reduce_{nullptr};
  torch::nn::Conv2d body_fuse_{nullptr};
  torch::nn::Conv2d phi_{nullptr};
  torch::nn::Conv2d psi_{nullptr};
  torch::nn::Conv2d out_fuse_{nullptr};
};

TORCH_MODULE(PgaModule);

// Zeroes channel 0 (background) of a (N,P,H,W) parsing map.
torch::Tensor part_channels(const torch::Tensor& parsing);

}  // namespace deocc::recovery
