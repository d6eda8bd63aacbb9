#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "deocc/datagen/types.hpp"
#include "deocc/harness/models.hpp"
#include "deocc/losses/embedding.hpp"

namespace deocc::harness {

struct LossRecord {
  int iteration = 0;
  std::map<std::string, double> terms;
};

// Runs after every iteration; returning false stops training early.
using StepCallback = std::function<bool(const LossRecord&)>;

struct TrainResult {
  std::vector<LossRecord> log;
  int iterations_run = 0;
};

/// Deterministic batch order: one seeded permutation per epoch; a batch
/// never straddles two epochs unless the dataset is smaller than a batch,
/// in which case every batch is the whole dataset.
class BatchSchedule {
 public:
  BatchSchedule(std::size_t dataset_size, int batch_size, std::uint64_t seed);
  std::vector<std::size_t> next();

 private:
  void reshuffle();

  std::size_t size_;
  std::size_t batch_;
  std::uint64_t seed_;
  std::uint64_t epoch_ = 0;
  std::size_t cursor_ = 0;
  std::vector<std::size_t> order_;
};

/// Alternating 1:1 discriminator / generator steps. Stage 1 uses SGD with
/// momentum for both networks.
TrainResult train_stage_one(StageOneModels& models, std::span<const datagen::OcclusionSample> data,
                            const TrainConfig& config, const losses::FeatureEmbedding& embedding,
                            const StepCallback& on_step = {});

/// Stage 2 uses Adam. Inputs are teacher-forced from the ground truth
/// (M_v = M_m, M_a, both parsing maps) unless `predictor` is given, in
/// which case they come from its binarized cascade outputs.
TrainResult train_stage_two(StageTwoModels& models, std::span<const datagen::OcclusionSample> data,
                            const TrainConfig& config, const losses::FeatureEmbedding& embedding,
                            StageOneModels* predictor = nullptr, const StepCallback& on_step = {});

// One JSON object per line: {"iteration": i, "<term>": value, ...}.
void write_loss_log(const std::filesystem::path& path, const std::vector<LossRecord>& log);

// Pins libtorch to `threads` intra-op threads and deterministic kernels.
void configure_runtime(int threads);

}  // namespace deocc::harness
