#pragma once

#include <cstdint>

#include "deocc/datagen/types.hpp"

namespace deocc::datagen {

// (|amodal| - |modal|) / |amodal|. Requires a non-empty amodal mask that
// contains the modal mask.
double occlusion_ratio(const BinaryMask& amodal, const BinaryMask& modal);

// Pastes the occluder with its top-left corner at (top, left) and derives
// every ground truth. The occluder must lie fully on the canvas.
OcclusionSample paste_occluder(const HumanRecord& human, const Occluder& occluder, int top, int left,
                               std::uint64_t seed = 0);

struct PlacementOptions {
  int grid_stride = 4;
  int refine_radius = 3;
  int max_trials = 2000;
  double tolerance = 0.02;
};

/// Places the occluder so the achieved ratio is within tolerance of
/// `target_ratio`: a seed-shuffled coarse grid pass, then an exhaustive
/// refinement window around the best grid hit. Ties keep the first
/// candidate visited, so the result is a pure function of the inputs.
/// Throws PlacementError when the best placement misses the tolerance.
OcclusionSample compose_occlusion(const HumanRecord& human, const Occluder& occluder,
                                  double target_ratio, std::uint64_t rng_seed,
                                  const PlacementOptions& options = {});

}  // namespace deocc::datagen
