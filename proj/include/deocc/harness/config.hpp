#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "deocc/losses/losses.hpp"
#include "deocc/maskcomp/stage_one_loss.hpp"
#include "deocc/recovery/recovery_net.hpp"
#include "deocc/recovery/stage_two_loss.hpp"

namespace deocc::harness {

/// Every knob of training, evaluation and inference. Defaults: loss
/// coefficients, optimizers and w follow the method description; canvas,
/// batch size and iteration count are desk scale.
struct TrainConfig {
  // paths
  std::string data_dir = "data/train";
  std::string eval_dir = "data/val";
  std::string run_dir;              // empty: $DEOCC_RUN_DIR, then "runs"
  std::string mask_checkpoint;      // empty: <run_dir>/stage1.ckpt
  std::string recover_checkpoint;   // empty: <run_dir>/stage2.ckpt

  int canvas = 64;
  int part_count = 7;
  std::uint64_t seed = 0;
  int threads = 1;

  // stage 1
  double lambda_seg = 1.0;
  double lambda_adv = 1.0;
  double lambda_gen = 0.1;
  double mask_lr = 1e-3;
  double mask_momentum = 0.9;
  int hourglass_base = 32;
  int hourglass_depth = 3;
  int template_k = 16;
  int template_resolution = 64;

  // stage 2
  double beta_adv = 0.1;
  double beta_l1 = 1.0;
  double beta_perceptual = 1.0;
  double beta_style = 40.0;
  double recover_lr = 1e-4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  int recover_base = 32;
  int pga_scales = 3;
  std::string assembly = "fusion";
  bool body_stream = true;
  bool relation_stream = true;
  double background_w = 0.3;
  bool train_on_predictions = false;

  // shared
  int disc_base = 32;
  std::string generator_objective = "nonsaturating";  // or "minimax"
  int batch_size = 8;
  int iterations = 2000;
  int log_every = 100;
  std::uint64_t embedding_seed = 0;

  // eval
  bool composite = false;
  int grid_samples = 8;

  void validate() const;  // throws ValidationError
  nlohmann::json to_json() const;

  std::string resolved_run_dir() const;
  std::string resolved_mask_checkpoint() const;
  std::string resolved_recover_checkpoint() const;

  maskcomp::Stage1Weights stage1_weights() const;
  recovery::Stage2Weights stage2_weights() const;
  losses::GeneratorObjective objective() const;
  recovery::RecoveryOptions recovery_options() const;
};

inline constexpr const char* kRunDirEnv = "DEOCC_RUN_DIR";

}  // namespace deocc::harness
