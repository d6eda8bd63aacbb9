#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "deocc/datagen/ratio.hpp"
#include "deocc/datagen/types.hpp"
#include "deocc/evalkit/cascade.hpp"
#include "deocc/evalkit/report.hpp"
#include "deocc/harness/config.hpp"
#include "deocc/harness/train.hpp"

namespace deocc::harness {

struct SynthOptions {
  std::filesystem::path out_dir = "data/train";
  std::uint64_t seed = 0;
  int humans = 64;
  int occluders_per_human = 1;
  int canvas = 64;
  int part_count = 7;
  double severity = 0.3;
  std::string split = "train";
  std::string ratios = "train";  // train | val
  // Overrides humans/occluders/ratios/split with the 297 x 3 validation set.
  bool validation_protocol = false;
};

struct SynthSummary {
  std::size_t count = 0;
  datagen::RatioDistribution distribution;
  std::vector<std::size_t> bin_counts;  // one per distribution bin
};

/// Writes the dataset plus ratio_histogram.json and ratio_histogram.png
/// (ten 0.1-wide bars, target bin masses drawn as ticks).
SynthSummary cmd_synth(const SynthOptions& options);

struct TrainOutcome {
  std::filesystem::path checkpoint;
  std::filesystem::path loss_log;
  TrainResult result;
};

// Trains on config.data_dir, writes the checkpoint and <run_dir>/stageN_losses.jsonl.
TrainOutcome cmd_train_mask(const TrainConfig& config);
TrainOutcome cmd_train_recover(const TrainConfig& config);

/// Scores the cascade on config.eval_dir. The stage-2 checkpoint is
/// optional; without it only mask metrics are reported. Writes
/// <run_dir>/report.json and, when grid_samples > 0, <run_dir>/grid.png.
evalkit::MetricReport cmd_eval(const TrainConfig& config);

struct InferRequest {
  std::optional<std::filesystem::path> sample_dir;  // a saved sample: uses its I_s and M_i
  std::optional<std::filesystem::path> image;       // or an RGB image ...
  std::optional<std::filesystem::path> mask;        // ... with its initial mask
  std::filesystem::path out_dir = "infer";
};

struct InferResult {
  ImageTensor occluded;
  BinaryMask modal;      // binarized, intersected with the amodal mask
  BinaryMask amodal;
  BinaryMask invisible;
  ParsingMap modal_parsing;
  ParsingMap amodal_parsing;
  ImageTensor recovered;
  ImageTensor composited;
  std::int64_t violations = 0;
  std::int64_t pixels = 0;
};

InferResult run_inference(StageOneModels& stage_one, StageTwoModels& stage_two, const ImageTensor& occluded,
                          const BinaryMask& initial_mask);

// Writes every output as PNG plus summary.json into request.out_dir.
InferResult cmd_infer(const TrainConfig& config, const InferRequest& request);

inline const std::vector<double> kAblationBackgroundGrid{0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0};

/// Retrains stage 2 (config.iterations each) for every w in the grid and
/// for the PGA variants (cascade assembly, body only, relation only, no
/// PGA) at the configured w, then scores each through the cascade with the
/// stage-1 checkpoint. Writes ablation.json and ablation.md. Report only.
nlohmann::json cmd_ablate(const TrainConfig& config);

}  // namespace deocc::harness
