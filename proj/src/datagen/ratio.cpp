#include "deocc/datagen/ratio.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deocc/core/errors.hpp"
#include "deocc/core/rng.hpp"

namespace deocc::datagen {

void RatioDistribution::validate() const {
  if (bins.empty()) throw ValidationError("ratio distribution has no bins");
  double total = 0;
  for (const auto& b : bins) {
    if (!(b.low >= 0 && b.low < b.high && b.high <= 1)) {
      throw ValidationError("invalid ratio bin [" + std::to_string(b.low) + ", " +
                            std::to_string(b.high) + ")");
    }
    if (!(b.probability >= 0)) throw ValidationError("negative bin probability");
    total += b.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("bin probabilities sum to " + std::to_string(total) + ", expected 1");
  }
  auto sorted = bins;
  std::sort(sorted.begin(), sorted.end(), [](const Bin& a, const Bin& b) { return a.low < b.low; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].low < sorted[i - 1].high) throw ValidationError("ratio bins overlap");
  }
}

std::optional<std::size_t> RatioDistribution::bin_of(double ratio) const {
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (ratio >= bins[i].low && ratio < bins[i].high) return i;
  }
  return std::nullopt;
}

RatioDistribution RatioDistribution::training_default() {
  return {{{0.0, 0.1, 1.0 / 3}, {0.1, 0.2, 1.0 / 3}, {0.3, 0.4, 1.0 / 3}}};
}

RatioDistribution RatioDistribution::validation_default() {
  return {{{0.0, 0.1, 0.25}, {0.1, 0.2, 0.25}, {0.3, 0.4, 0.25}, {0.4, 0.5, 0.25}}};
}

double sample_ratio(const RatioDistribution& dist, std::uint64_t rng_seed) {
  dist.validate();
  Rng rng(rng_seed);
  const double u = uniform(rng, 0.0, 1.0);
  double acc = 0;
  std::size_t pick = dist.bins.size() - 1;
  for (std::size_t i = 0; i < dist.bins.size(); ++i) {
    acc += dist.bins[i].probability;
    if (u < acc) {
      pick = i;
      break;
    }
  }
  // Skip trailing zero-probability bins that rounding could land on.
  while (dist.bins[pick].probability == 0 && pick > 0) --pick;
  const auto& bin = dist.bins[pick];
  const double v = uniform(rng, bin.low, bin.high);
  return std::min(v, std::nextafter(bin.high, bin.low));
}

}  // namespace deocc::datagen
