#include "deocc/datagen/compose.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "deocc/core/errors.hpp"
#include "deocc/core/rng.hpp"

namespace deocc::datagen {

double occlusion_ratio(const BinaryMask& amodal, const BinaryMask& modal) {
  const auto total = amodal.count();
  if (total == 0) throw ValidationError("occlusion ratio of an empty amodal mask");
  if (!modal.subset_of(amodal)) throw ValidationError("modal mask is not contained in the amodal mask");
  return static_cast<double>(total - modal.count()) / static_cast<double>(total);
}

namespace {

void check_fits(const HumanRecord& human, const Occluder& occ) {
  if (occ.mask.height() > human.amodal.height() || occ.mask.width() > human.amodal.width()) {
    throw ValidationError("occluder larger than the canvas");
  }
  if (occ.mask.size() != occ.patch.size()) throw ValidationError("occluder patch/mask size mismatch");
}

std::int64_t covered_pixels(const BinaryMask& amodal, const BinaryMask& occ, int top, int left) {
  std::int64_t n = 0;
  for (int y = 0; y < occ.height(); ++y) {
    for (int x = 0; x < occ.width(); ++x) {
      n += occ.at(y, x) & amodal.at(top + y, left + x);
    }
  }
  return n;
}

}  // namespace

OcclusionSample paste_occluder(const HumanRecord& human, const Occluder& occ, int top, int left,
                               std::uint64_t seed) {
  check_fits(human, occ);
  const Size2 size = human.amodal.size();
  if (top < 0 || left < 0 || top + occ.mask.height() > size.height ||
      left + occ.mask.width() > size.width) {
    throw ValidationError("occluder placement falls outside the canvas");
  }
  OcclusionSample s;
  s.full_image = human.image;
  s.occluded_image = human.image;
  s.amodal_mask = human.amodal;
  s.amodal_parsing = human.parsing;
  s.occluder_mask = BinaryMask(size);
  for (int y = 0; y < occ.mask.height(); ++y) {
    for (int x = 0; x < occ.mask.width(); ++x) {
      if (!occ.mask.at(y, x)) continue;
      s.occluder_mask.at(top + y, left + x) = 1;
      for (int c = 0; c < ImageTensor::kChannels; ++c) {
        s.occluded_image.at(c, top + y, left + x) = occ.patch.at(c, y, x);
      }
    }
  }
  s.modal_mask = mask_and_not(s.amodal_mask, s.occluder_mask);
  s.modal_parsing = s.amodal_parsing.restricted_to(s.modal_mask);
  s.initial_mask = s.modal_mask;
  s.occlusion_ratio = occlusion_ratio(s.amodal_mask, s.modal_mask);
  s.seed = seed;
  return s;
}

OcclusionSample compose_occlusion(const HumanRecord& human, const Occluder& occ, double target_ratio,
                                  std::uint64_t rng_seed, const PlacementOptions& options) {
  if (!(target_ratio >= 0.0 && target_ratio < 1.0)) {
    throw ValidationError("target ratio must be in [0,1), got " + std::to_string(target_ratio));
  }
  check_fits(human, occ);
  const auto total = human.amodal.count();
  if (total == 0) throw ValidationError("human has an empty amodal mask");

  const int max_top = human.amodal.height() - occ.mask.height();
  const int max_left = human.amodal.width() - occ.mask.width();
  const int stride = std::max(1, options.grid_stride);

  Rng rng(rng_seed);
  const int phase_y = uniform_int(rng, 0, stride - 1) % (max_top + 1);
  const int phase_x = uniform_int(rng, 0, stride - 1) % (max_left + 1);
  std::vector<std::pair<int, int>> grid;
  for (int t = phase_y; t <= max_top; t += stride) {
    for (int l = phase_x; l <= max_left; l += stride) grid.emplace_back(t, l);
  }
  std::shuffle(grid.begin(), grid.end(), rng);

  const int refine_side = 2 * options.refine_radius + 1;
  const int grid_budget = std::max(1, options.max_trials - refine_side * refine_side);
  if (static_cast<int>(grid.size()) > grid_budget) grid.resize(grid_budget);

  int best_top = 0;
  int best_left = 0;
  double best_err = 2.0;
  auto consider = [&](int t, int l) {
    const double ratio = static_cast<double>(covered_pixels(human.amodal, occ.mask, t, l)) / total;
    const double err = std::abs(ratio - target_ratio);
    if (err < best_err) {
      best_err = err;
      best_top = t;
      best_left = l;
    }
  };
  for (auto [t, l] : grid) consider(t, l);

  const int center_top = best_top;
  const int center_left = best_left;
  for (int dy = -options.refine_radius; dy <= options.refine_radius; ++dy) {
    for (int dx = -options.refine_radius; dx <= options.refine_radius; ++dx) {
      const int t = center_top + dy;
      const int l = center_left + dx;
      if (t < 0 || l < 0 || t > max_top || l > max_left) continue;
      consider(t, l);
    }
  }

  if (best_err > options.tolerance) {
    throw PlacementError("no occluder placement within " + std::to_string(options.tolerance) +
                         " of target ratio " + std::to_string(target_ratio) + " (best error " +
                         std::to_string(best_err) + ")");
  }
  return paste_occluder(human, occ, best_top, best_left, rng_seed);
}

}  // namespace deocc::datagen
