#include "deocc/harness/models.hpp"

#include "deocc/core/errors.hpp"
#include "deocc/core/rng.hpp"
#include "deocc/nn/checkpoint.hpp"
#include "deocc/nn/init.hpp"

namespace deocc::harness {

namespace {

enum SeedStream : std::uint64_t { kStageOneNet = 11, kStageOneDisc = 12, kStageTwoNet = 21, kStageTwoDisc = 22 };

void append_prefixed(nn::NamedTensors& out, const std::string& prefix, const torch::nn::Module& module) {
  for (auto& [name, t] : nn::collect_state(module)) out.emplace_back(prefix + name, t);
}

nn::NamedTensors take_prefixed(const nn::NamedTensors& all, const std::string& prefix) {
  nn::NamedTensors out;
  for (const auto& [name, t] : all) {
    if (name.rfind(prefix, 0) == 0) out.emplace_back(name.substr(prefix.size()), t);
  }
  return out;
}

void check_kind(const nn::Checkpoint& ckpt, const char* kind, const std::filesystem::path& path) {
  if (ckpt.kind != kind) {
    throw FormatError(path.string() + " holds a '" + ckpt.kind + "' checkpoint, expected '" + kind + "'");
  }
}

template <typename T>
T meta(const nn::Checkpoint& ckpt, const char* key) {
  try {
    return ckpt.metadata.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("checkpoint metadata lacks '") + key + "'");
  }
}

}  // namespace

StageOneModels make_stage_one(const TrainConfig& config, const maskcomp::TemplateBank& bank) {
  StageOneModels m;
  m.net = maskcomp::StageOneNet(
      maskcomp::StageOneOptions{config.part_count, config.hourglass_base, config.hourglass_depth}, bank);
  m.disc = maskcomp::PatchDiscriminator(maskcomp::DiscriminatorOptions{1, config.disc_base});
  nn::init_fan_in_uniform(*m.net, derive_seed(config.seed, {kStageOneNet}));
  nn::init_fan_in_uniform(*m.disc, derive_seed(config.seed, {kStageOneDisc}));
  return m;
}

StageTwoModels make_stage_two(const TrainConfig& config) {
  StageTwoModels m;
  m.net = recovery::RecoveryNet(config.recovery_options());
  m.disc = maskcomp::PatchDiscriminator(maskcomp::DiscriminatorOptions{3, config.disc_base});
  nn::init_fan_in_uniform(*m.net, derive_seed(config.seed, {kStageTwoNet}));
  nn::init_fan_in_uniform(*m.disc, derive_seed(config.seed, {kStageTwoDisc}));
  return m;
}

void save_stage_one(const std::filesystem::path& path, const StageOneModels& models, const TrainConfig& config) {
  nn::Checkpoint ckpt;
  ckpt.kind = kStageOneKind;
  const auto& o = models.net->options();
  const auto& t = models.net->templates();
  ckpt.metadata = {{"part_count", o.part_count},
                   {"hourglass_base", o.base_channels},
                   {"hourglass_depth", o.depth},
                   {"template_count", t.size(0)},
                   {"template_resolution", {t.size(1), t.size(2)}},
                   {"disc_base", models.disc->options().base_channels},
                   {"config", config.to_json()}};
  append_prefixed(ckpt.tensors, "net.", *models.net);
  append_prefixed(ckpt.tensors, "disc.", *models.disc);
  nn::save_checkpoint(path, ckpt);
}

StageOneModels load_stage_one(const std::filesystem::path& path) {
  const auto ckpt = nn::load_checkpoint(path);
  check_kind(ckpt, kStageOneKind, path);
  const auto net_state = take_prefixed(ckpt.tensors, "net.");
  torch::Tensor templates;
  for (const auto& [name, tensor] : net_state) {
    if (name == "templates") templates = tensor.to(torch::kFloat32).contiguous();
  }
  if (!templates.defined() || templates.dim() != 3) throw FormatError("stage-1 checkpoint lacks the template bank");
  maskcomp::TemplateBank bank;
  bank.count = static_cast<int>(templates.size(0));
  bank.resolution = Size2{static_cast<int>(templates.size(1)), static_cast<int>(templates.size(2))};
  bank.templates.assign(templates.data_ptr<float>(), templates.data_ptr<float>() + templates.numel());

  StageOneModels m;
  m.net = maskcomp::StageOneNet(maskcomp::StageOneOptions{meta<int>(ckpt, "part_count"),
                                                          meta<int>(ckpt, "hourglass_base"),
                                                          meta<int>(ckpt, "hourglass_depth")},
                                bank);
  m.disc = maskcomp::PatchDiscriminator(maskcomp::DiscriminatorOptions{1, meta<int>(ckpt, "disc_base")});
  nn::restore_state(*m.net, net_state);
  nn::restore_state(*m.disc, take_prefixed(ckpt.tensors, "disc."));
  return m;
}

void save_stage_two(const std::filesystem::path& path, const StageTwoModels& models, const TrainConfig& config) {
  nn::Checkpoint ckpt;
  ckpt.kind = kStageTwoKind;
  const auto& o = models.net->options();
  ckpt.metadata = {{"part_count", o.part_count},
                   {"recover_base", o.base_channels},
                   {"pga_scales", o.pga_scales},
                   {"max_relation_pixels", o.max_relation_pixels},
                   {"assembly", recovery::to_string(o.assembly)},
                   {"body_stream", o.body_stream},
                   {"relation_stream", o.relation_stream},
                   {"background_w", o.background_w},
                   {"disc_base", models.disc->options().base_channels},
                   {"config", config.to_json()}};
  append_prefixed(ckpt.tensors, "net.", *models.net);
  append_prefixed(ckpt.tensors, "disc.", *models.disc);
  nn::save_checkpoint(path, ckpt);
}

StageTwoModels load_stage_two(const std::filesystem::path& path) {
  const auto ckpt = nn::load_checkpoint(path);
  check_kind(ckpt, kStageTwoKind, path);
  recovery::RecoveryOptions o;
  o.part_count = meta<int>(ckpt, "part_count");
  o.base_channels = meta<int>(ckpt, "recover_base");
  o.pga_scales = meta<int>(ckpt, "pga_scales");
  o.max_relation_pixels = meta<int>(ckpt, "max_relation_pixels");
  o.assembly = recovery::parse_assembly(meta<std::string>(ckpt, "assembly"));
  o.body_stream = meta<bool>(ckpt, "body_stream");
  o.relation_stream = meta<bool>(ckpt, "relation_stream");
  o.background_w = meta<double>(ckpt, "background_w");
  StageTwoModels m;
  m.net = recovery::RecoveryNet(o);
  m.disc = maskcomp::PatchDiscriminator(maskcomp::DiscriminatorOptions{3, meta<int>(ckpt, "disc_base")});
  nn::restore_state(*m.net, take_prefixed(ckpt.tensors, "net."));
  nn::restore_state(*m.disc, take_prefixed(ckpt.tensors, "disc."));
  return m;
}

}  // namespace deocc::harness
