#pragma once

#include <filesystem>

#include "deocc/harness/config.hpp"
#include "deocc/maskcomp/discriminator.hpp"
#include "deocc/maskcomp/stage_one.hpp"
#include "deocc/recovery/recovery_net.hpp"

namespace deocc::harness {

struct StageOneModels {
  maskcomp::StageOneNet net{nullptr};
  maskcomp::PatchDiscriminator disc{nullptr};  // D_m, sees 1-channel soft amodal maps
};

struct StageTwoModels {
  recovery::RecoveryNet net{nullptr};
  maskcomp::PatchDiscriminator disc{nullptr};  // D_c, sees RGB images
};

// Freshly initialised (seeded fan-in uniform) models.
StageOneModels make_stage_one(const TrainConfig& config, const maskcomp::TemplateBank& bank);
StageTwoModels make_stage_two(const TrainConfig& config);

inline constexpr const char* kStageOneKind = "stage1";
inline constexpr const char* kStageTwoKind = "stage2";

/// Architecture settings go in the checkpoint metadata, so loading needs
/// nothing but the file. Tensors are prefixed "net." and "disc.".
void save_stage_one(const std::filesystem::path& path, const StageOneModels& models, const TrainConfig& config);
StageOneModels load_stage_one(const std::filesystem::path& path);
void save_stage_two(const std::filesystem::path& path, const StageTwoModels& models, const TrainConfig& config);
StageTwoModels load_stage_two(const std::filesystem::path& path);

}  // namespace deocc::harness
