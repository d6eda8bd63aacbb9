#pragma once

#include <cstdint>
#include <vector>

#include "deocc/core/image.hpp"

namespace deocc::maskcomp {

using Points = std::vector<std::vector<double>>;

struct KMeansResult {
  Points centers;
  std::vector<int> assignment;
  // Sum of squared distances after each assignment step.
  std::vector<double> objective_history;
  double objective = 0.0;
  int iterations = 0;
};

// k-means++ seeding; the first centre is uniform, later ones are drawn
// with probability proportional to the squared distance to the nearest
// chosen centre.
Points kmeans_plus_plus_seeds(const Points& points, int k, std::uint64_t seed);

/// Lloyd iterations from `initial` centres. Ties go to the lowest centre
/// index and an empty cluster keeps its previous centre. Stops when the
/// assignment is unchanged, the relative objective improvement drops
/// below `relative_tolerance`, or after `max_iterations`.
KMeansResult lloyd(const Points& points, Points initial, int max_iterations = 100,
                   double relative_tolerance = 1e-6);

KMeansResult kmeans(const Points& points, int k, std::uint64_t seed, int max_iterations = 100,
                    double relative_tolerance = 1e-6);

/// Soft pose templates: k-means centres of resized, flattened amodal masks.
struct TemplateBank {
  int count = 0;
  Size2 resolution{64, 64};
  std::vector<float> templates;  // count x H x W, values in [0,1]

  float at(int k, int y, int x) const {
    return templates[(static_cast<std::size_t>(k) * resolution.height + y) * resolution.width + x];
  }
  void validate() const;
};

TemplateBank build_template_bank(const std::vector<BinaryMask>& amodal_masks, int k, std::uint64_t seed,
                                 Size2 resolution = {64, 64});

}  // namespace deocc::maskcomp
