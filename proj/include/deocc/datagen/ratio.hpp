#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace deocc::datagen {

/// Piecewise-uniform distribution of occlusion ratios over half-open bins.
struct RatioDistribution {
  struct Bin {
    double low = 0;
    double high = 0;
    double probability = 0;
  };
  std::vector<Bin> bins;

  // Disjoint bins inside [0,1], low < high, probabilities summing to 1.
  void validate() const;

  // Index of the bin holding `ratio`, if any.
  std::optional<std::size_t> bin_of(double ratio) const;

  // Training mix: [0,0.1), [0.1,0.2), [0.3,0.4) at 1/3 each. The gap at
  // [0.2,0.3) is intentional.
  static RatioDistribution training_default();
  // Validation mix: training bins plus [0.4,0.5), 1/4 each.
  static RatioDistribution validation_default();
};

// Picks a bin by probability, then a uniform value inside it.
double sample_ratio(const RatioDistribution& dist, std::uint64_t rng_seed);

}  // namespace deocc::datagen
