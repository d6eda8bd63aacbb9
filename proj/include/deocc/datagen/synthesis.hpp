#pragma once

#include <cstdint>
#include <vector>

#include "deocc/datagen/compose.hpp"
#include "deocc/datagen/ratio.hpp"
#include "deocc/datagen/types.hpp"

namespace deocc::datagen {

struct SynthesisConfig {
  std::uint64_t master_seed = 0;
  Size2 canvas{64, 64};
  int part_count = 7;
  RatioDistribution ratios = RatioDistribution::training_default();
  int humans = 64;
  int occluders_per_human = 1;
  double corruption_severity = 0.3;
  Split split = Split::kTrain;
  // Fresh occluder draws allowed before giving up on a sample.
  int max_attempts = 64;
  PlacementOptions placement;

  int sample_count() const { return humans * occluders_per_human; }
  void validate() const;
};

// The 297 humans x 3 occluders validation protocol (891 samples).
SynthesisConfig validation_protocol(std::uint64_t master_seed, Size2 canvas = {64, 64});

/// Sample `index` of the dataset; a pure function of (config, index).
/// Samples sharing index / occluders_per_human share the same human.
/// An attempt is accepted only when the achieved ratio lands in the bin
/// its target was drawn from, which keeps the bin masses exact.
OcclusionSample synthesize_sample(const SynthesisConfig& config, int index);

std::vector<OcclusionSample> synthesize_dataset(const SynthesisConfig& config);

}  // namespace deocc::datagen
