#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "deocc/datagen/types.hpp"
#include "deocc/evalkit/cascade.hpp"
#include "deocc/evalkit/report.hpp"
#include "deocc/losses/embedding.hpp"

namespace deocc::evalkit {

struct EvalOptions {
  int batch_size = 16;
  double threshold = maskcomp::kBinarizeThreshold;
  bool composite = false;  // also report metrics on the visible-region composite
  std::optional<std::filesystem::path> grid_path;
  int grid_samples = 8;
};

/// Runs the cascade over `samples` and scores it against their ground truth.
///
/// Per-sample keys: l1_amodal_mask (soft M̂_a vs M_a, full map, headline),
/// l1_amodal_mask_region (inside M_a), iou_modal, iou_amodal,
/// iou_invisible, violation_fraction; with a stage-2 net also l1_image,
/// l1_image_invisible (inside the true invisible mask, when non-empty)
/// and, with `composite`, the same two for the composite. Set-level:
/// frechet (and frechet_composite) between embedded Î_o and I_o.
MetricReport evaluate(std::span<const datagen::OcclusionSample> samples, maskcomp::StageOneNet& stage_one,
                      recovery::RecoveryNet* stage_two, const losses::FeatureEmbedding& embedding,
                      const EvalOptions& options, const nlohmann::json& config);

// Panels are tiled left to right, rows top to bottom, with a 2 px white
// gutter. Every panel in the grid must share one size.
void write_grid(const std::filesystem::path& path, const std::vector<std::vector<ImageTensor>>& rows);

ImageTensor mask_panel(const BinaryMask& mask);
ImageTensor soft_panel(const torch::Tensor& map);  // (1,H,W) or (H,W) in [0,1]

}  // namespace deocc::evalkit
