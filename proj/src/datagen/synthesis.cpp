#include "deocc/datagen/synthesis.hpp"

#include <algorithm>
#include <string>

#include "deocc/core/errors.hpp"
#include "deocc/core/rng.hpp"
#include "deocc/datagen/corrupt.hpp"
#include "deocc/datagen/human.hpp"
#include "deocc/datagen/occluder.hpp"

namespace deocc::datagen {

namespace {

enum Stream : std::uint64_t { kHumanStream = 1, kAttemptStream = 2 };

}  // namespace

void SynthesisConfig::validate() const {
  ratios.validate();
  if (humans < 1 || occluders_per_human < 1) throw ValidationError("sample counts must be >= 1");
  if (canvas.height < kMinCanvas || canvas.width < kMinCanvas) {
    throw ValidationError("canvas must be at least 32x32");
  }
  if (part_count < 2) throw ValidationError("part_count must be >= 2");
  if (!(corruption_severity >= 0 && corruption_severity <= 1)) {
    throw ValidationError("corruption severity must be in [0,1]");
  }
  if (max_attempts < 1) throw ValidationError("max_attempts must be >= 1");
}

SynthesisConfig validation_protocol(std::uint64_t master_seed, Size2 canvas) {
  SynthesisConfig config;
  config.master_seed = master_seed;
  config.canvas = canvas;
  config.ratios = RatioDistribution::validation_default();
  config.humans = 297;
  config.occluders_per_human = 3;
  config.split = Split::kVal;
  return config;
}

OcclusionSample synthesize_sample(const SynthesisConfig& config, int index) {
  const int human_index = index / config.occluders_per_human;
  const HumanRecord human =
      generate_human(derive_seed(config.master_seed, {kHumanStream, static_cast<std::uint64_t>(human_index)}),
                     config.canvas, config.part_count);
  const Size2 occluder_max{std::max(8, config.canvas.height * 3 / 5),
                           std::max(8, config.canvas.width * 3 / 5)};

  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    const std::uint64_t seed = derive_seed(
        config.master_seed,
        {kAttemptStream, static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(attempt)});
    const double target = sample_ratio(config.ratios, seed);
    const auto bin = config.ratios.bin_of(target);
    const Occluder occ = generate_occluder(mix64(seed ^ 0x1), occluder_max);
    try {
      OcclusionSample s = compose_occlusion(human, occ, target, seed, config.placement);
      if (config.ratios.bin_of(s.occlusion_ratio) != bin) continue;
      s.initial_mask = corrupt_modal_mask(s.modal_mask, config.corruption_severity, mix64(seed ^ 0x2));
      s.split = config.split;
      return s;
    } catch (const PlacementError&) {
      continue;
    }
  }
  throw PlacementError("sample " + std::to_string(index) + ": no valid occlusion after " +
                       std::to_string(config.max_attempts) + " occluder draws");
}

std::vector<OcclusionSample> synthesize_dataset(const SynthesisConfig& config) {
  config.validate();
  std::vector<OcclusionSample> samples;
  samples.reserve(config.sample_count());
  for (int i = 0; i < config.sample_count(); ++i) samples.push_back(synthesize_sample(config, i));
  return samples;
}

}  // namespace deocc::datagen
