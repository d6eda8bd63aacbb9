#include "deocc/datagen/occluder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "deocc/core/errors.hpp"
#include "deocc/core/rng.hpp"

namespace deocc::datagen {

namespace {

struct Ellipse {
  double cy, cx, ry, rx, angle;

  bool contains(double y, double x) const {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double dy = y - cy;
    const double dx = x - cx;
    const double u = (c * dx + s * dy) / rx;
    const double v = (-s * dx + c * dy) / ry;
    return u * u + v * v <= 1.0;
  }
};

}  // namespace

Occluder generate_occluder(std::uint64_t seed, Size2 max_size) {
  if (max_size.height < 8 || max_size.width < 8) {
    throw ValidationError("occluder max size must be at least 8x8, got " +
                          std::to_string(max_size.height) + "x" + std::to_string(max_size.width));
  }
  Rng rng(seed);
  const Size2 size{uniform_int(rng, max_size.height / 2, max_size.height),
                   uniform_int(rng, max_size.width / 2, max_size.width)};
  const double h = size.height;
  const double w = size.width;

  std::vector<Ellipse> blobs;
  blobs.push_back({h / 2, w / 2, uniform(rng, 0.3, 0.5) * h, uniform(rng, 0.3, 0.5) * w,
                   uniform(rng, 0.0, std::numbers::pi)});
  const int extra = uniform_int(rng, 0, 3);
  for (int i = 0; i < extra; ++i) {
    const double ry = uniform(rng, 0.15, 0.35) * h;
    const double rx = uniform(rng, 0.15, 0.35) * w;
    blobs.push_back({uniform(rng, ry, h - ry), uniform(rng, rx, w - rx), ry, rx,
                     uniform(rng, 0.0, std::numbers::pi)});
  }

  const double base[3] = {uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)};
  const double stripe_amp = uniform(rng, 0.0, 0.25);
  const double stripe_freq = uniform(rng, 0.2, 1.0);
  const double stripe_angle = uniform(rng, 0.0, std::numbers::pi);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);

  Occluder occ{ImageTensor(size), BinaryMask(size)};
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      const double py = y + 0.5;
      const double px = x + 0.5;
      const bool inside = std::any_of(blobs.begin(), blobs.end(),
                                      [&](const Ellipse& e) { return e.contains(py, px); });
      occ.mask.at(y, x) = inside ? 1 : 0;
      const double stripe =
          stripe_amp * std::sin(stripe_freq * (px * std::cos(stripe_angle) + py * std::sin(stripe_angle)));
      for (int c = 0; c < 3; ++c) {
        const double v = inside ? base[c] + stripe + noise(rng) : 0.0;
        occ.patch.at(c, y, x) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
  return occ;
}

}  // namespace deocc::datagen
