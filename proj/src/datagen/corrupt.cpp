#include "deocc/datagen/corrupt.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "deocc/core/errors.hpp"
#include "deocc/core/rng.hpp"

namespace deocc::datagen {

namespace {

// Out-of-canvas pixels count as background.
BinaryMask morph(const BinaryMask& mask, int radius, bool dilation) {
  BinaryMask out(mask.size());
  const int r2 = radius * radius;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      bool any = false;
      bool all = true;
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          if (dy * dy + dx * dx > r2) continue;
          const int yy = y + dy;
          const int xx = x + dx;
          const bool v = yy >= 0 && xx >= 0 && yy < mask.height() && xx < mask.width() && mask.at(yy, xx);
          any |= v;
          all &= v;
        }
      }
      out.at(y, x) = (dilation ? any : all) ? 1 : 0;
    }
  }
  return out;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, int radius) { return morph(mask, radius, false); }
BinaryMask dilate(const BinaryMask& mask, int radius) { return morph(mask, radius, true); }

BinaryMask corrupt_modal_mask(const BinaryMask& modal, double severity, std::uint64_t rng_seed) {
  modal.validate();
  if (!(severity >= 0.0 && severity <= 1.0)) {
    throw ValidationError("corruption severity must be in [0,1]");
  }
  if (severity == 0.0) return modal;

  Rng rng(rng_seed);
  const int radius = std::max(1, static_cast<int>(std::lround(3.0 * severity)));
  const BinaryMask morphed = uniform(rng, 0.0, 1.0) < 0.5 ? erode(modal, radius) : dilate(modal, radius);
  // Only part of the morphological change is applied at low severity.
  const double keep_p = std::min(1.0, 0.25 + severity);
  BinaryMask out = modal;
  for (std::size_t i = 0; i < out.data().size(); ++i) {
    if (morphed.data()[i] != modal.data()[i] && uniform(rng, 0.0, 1.0) < keep_p) {
      out.data()[i] = morphed.data()[i];
    }
  }

  const double flip_p = 0.5 * severity;
  const BinaryMask before = out;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const auto v = before.at(y, x);
      const bool edge = (y > 0 && before.at(y - 1, x) != v) ||
                        (y + 1 < out.height() && before.at(y + 1, x) != v) ||
                        (x > 0 && before.at(y, x - 1) != v) ||
                        (x + 1 < out.width() && before.at(y, x + 1) != v);
      if (edge && uniform(rng, 0.0, 1.0) < flip_p) out.at(y, x) = v ? 0 : 1;
    }
  }

  const int max_holes = static_cast<int>(std::lround(3.0 * severity));
  const int holes = uniform_int(rng, 0, max_holes);
  for (int h = 0; h < holes; ++h) {
    std::vector<int> fg;
    for (int i = 0; i < static_cast<int>(out.data().size()); ++i) {
      if (out.data()[i]) fg.push_back(i);
    }
    if (fg.empty()) break;
    const int center = fg[uniform_int(rng, 0, static_cast<int>(fg.size()) - 1)];
    const int cy = center / out.width();
    const int cx = center % out.width();
    const int hr = uniform_int(rng, 1, 1 + max_holes);
    for (int y = std::max(0, cy - hr); y <= std::min(out.height() - 1, cy + hr); ++y) {
      for (int x = std::max(0, cx - hr); x <= std::min(out.width() - 1, cx + hr); ++x) {
        if ((y - cy) * (y - cy) + (x - cx) * (x - cx) <= hr * hr) out.at(y, x) = 0;
      }
    }
  }
  return out;
}

}  // namespace deocc::datagen
