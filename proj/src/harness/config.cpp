#include "deocc/harness/config.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "deocc/core/errors.hpp"

namespace deocc::harness {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

bool nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void TrainConfig::validate() const {
  require(canvas >= 32, "canvas must be >= 32");
  require(part_count >= 2 && part_count <= 255, "part_count must lie in [2,255]");
  require(threads >= 1, "threads must be >= 1");
  require(nonneg(lambda_seg) && nonneg(lambda_adv) && nonneg(lambda_gen), "lambda coefficients must be >= 0");
  require(nonneg(beta_adv) && nonneg(beta_l1) && nonneg(beta_perceptual) && nonneg(beta_style),
          "beta coefficients must be >= 0");
  require(mask_lr > 0 && recover_lr > 0, "learning rates must be > 0");
  require(mask_momentum >= 0 && mask_momentum < 1, "mask_momentum must lie in [0,1)");
  require(adam_beta1 >= 0 && adam_beta1 < 1 && adam_beta2 >= 0 && adam_beta2 < 1, "adam betas must lie in [0,1)");
  require(hourglass_base >= 1 && hourglass_depth >= 1, "hourglass sizes must be >= 1");
  require(template_k >= 1, "template_k must be >= 1");
  require(template_resolution >= 1, "template_resolution must be >= 1");
  require(recover_base >= 1 && disc_base >= 1, "channel counts must be >= 1");
  require(pga_scales >= 0 && pga_scales <= 5, "pga_scales must lie in [0,5]");
  recovery::parse_assembly(assembly);
  require(background_w >= 0 && background_w <= 1, "background_w must lie in [0,1]");
  require(generator_objective == "nonsaturating" || generator_objective == "minimax",
          "generator_objective must be nonsaturating or minimax");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(iterations >= 0, "iterations must be >= 0");
  require(log_every >= 1, "log_every must be >= 1");
  require(grid_samples >= 0, "grid_samples must be >= 0");
}

nlohmann::json TrainConfig::to_json() const {
  return {
      {"data_dir", data_dir},
      {"eval_dir", eval_dir},
      {"canvas", canvas},
      {"part_count", part_count},
      {"seed", seed},
      {"lambda_seg", lambda_seg},
      {"lambda_adv", lambda_adv},
      {"lambda_gen", lambda_gen},
      {"mask_lr", mask_lr},
      {"mask_momentum", mask_momentum},
      {"hourglass_base", hourglass_base},
      {"hourglass_depth", hourglass_depth},
      {"template_k", template_k},
      {"template_resolution", template_resolution},
      {"beta_adv", beta_adv},
      {"beta_l1", beta_l1},
      {"beta_perceptual", beta_perceptual},
      {"beta_style", beta_style},
      {"recover_lr", recover_lr},
      {"adam_beta1", adam_beta1},
      {"adam_beta2", adam_beta2},
      {"recover_base", recover_base},
      {"pga_scales", pga_scales},
      {"assembly", assembly},
      {"body_stream", body_stream},
      {"relation_stream", relation_stream},
      {"background_w", background_w},
      {"train_on_predictions", train_on_predictions},
      {"disc_base", disc_base},
      {"generator_objective", generator_objective},
      {"batch_size", batch_size},
      {"iterations", iterations},
      {"embedding_seed", embedding_seed},
      {"composite", composite},
  };
}

std::string TrainConfig::resolved_run_dir() const {
  if (!run_dir.empty()) return run_dir;
  if (const char* env = std::getenv(kRunDirEnv); env != nullptr && *env != '\0') return env;
  return "runs";
}

std::string TrainConfig::resolved_mask_checkpoint() const {
  if (!mask_checkpoint.empty()) return mask_checkpoint;
  return (std::filesystem::path(resolved_run_dir()) / "stage1.ckpt").string();
}

std::string TrainConfig::resolved_recover_checkpoint() const {
  if (!recover_checkpoint.empty()) return recover_checkpoint;
  return (std::filesystem::path(resolved_run_dir()) / "stage2.ckpt").string();
}

maskcomp::Stage1Weights TrainConfig::stage1_weights() const { return {lambda_seg, lambda_adv, lambda_gen}; }

recovery::Stage2Weights TrainConfig::stage2_weights() const {
  return {beta_adv, beta_l1, beta_perceptual, beta_style};
}

losses::GeneratorObjective TrainConfig::objective() const {
  return generator_objective == "minimax" ? losses::GeneratorObjective::kMinimax
                                          : losses::GeneratorObjective::kNonSaturating;
}

recovery::RecoveryOptions TrainConfig::recovery_options() const {
  recovery::RecoveryOptions o;
  o.part_count = part_count;
  o.base_channels = recover_base;
  o.pga_scales = pga_scales;
  o.assembly = recovery::parse_assembly(assembly);
  o.body_stream = body_stream;
  o.relation_stream = relation_stream;
  o.background_w = background_w;
  return o;
}

}  // namespace deocc::harness
