#include "deocc/datagen/human.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "deocc/core/errors.hpp"
#include "deocc/core/rng.hpp"

namespace deocc::datagen {

namespace {

enum FinePart : int {
  kHead = 1,
  kTorso,
  kLeftUpperArm,
  kLeftForearm,
  kRightUpperArm,
  kRightForearm,
  kLeftThigh,
  kLeftShin,
  kRightThigh,
  kRightShin,
  kLeftHand,
  kRightHand,
  kLeftFoot,
  kRightFoot,
  kFinePartCount = kRightFoot
};

constexpr std::array<int, kFinePartCount + 1> kCoarseGroup = {
    0, 1, 2, 3, 3, 4, 4, 5, 5, 6, 6, 3, 4, 5, 6};

int label_for(int fine, int part_count) {
  const int parts = part_count - 1;
  if (parts >= kFinePartCount) return fine;
  const int coarse = kCoarseGroup[fine];
  if (parts >= 6) return coarse;
  return 1 + (coarse - 1) % parts;
}

struct Vec2 {
  double x = 0;
  double y = 0;
};

Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }

// Direction at `angle` radians from straight down, positive towards +x.
Vec2 down_dir(double angle) { return {std::sin(angle), std::cos(angle)}; }

// A capsule (segment with radius) or, when `ellipse` is set, an
// axis-aligned ellipse centred at `a` with radii (rx, ry).
struct Primitive {
  int part = 0;
  bool ellipse = false;
  Vec2 a;
  Vec2 b;
  double radius = 0;
  double rx = 0;
  double ry = 0;

  bool contains(Vec2 p) const {
    if (ellipse) {
      const double dx = (p.x - a.x) / rx;
      const double dy = (p.y - a.y) / ry;
      return dx * dx + dy * dy <= 1.0;
    }
    const Vec2 ab = b - a;
    const Vec2 ap = p - a;
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    const double t = len2 > 0 ? std::clamp((ap.x * ab.x + ap.y * ab.y) / len2, 0.0, 1.0) : 0.0;
    const Vec2 d = ap - ab * t;
    return d.x * d.x + d.y * d.y <= radius * radius;
  }

  void extend(double& x0, double& y0, double& x1, double& y1) const {
    if (ellipse) {
      x0 = std::min(x0, a.x - rx);
      x1 = std::max(x1, a.x + rx);
      y0 = std::min(y0, a.y - ry);
      y1 = std::max(y1, a.y + ry);
      return;
    }
    x0 = std::min({x0, a.x - radius, b.x - radius});
    x1 = std::max({x1, a.x + radius, b.x + radius});
    y0 = std::min({y0, a.y - radius, b.y - radius});
    y1 = std::max({y1, a.y + radius, b.y + radius});
  }

  void transform(double scale, Vec2 offset) {
    a = a * scale + offset;
    b = b * scale + offset;
    radius *= scale;
    rx *= scale;
    ry *= scale;
  }
};

constexpr double kDeg = std::numbers::pi / 180.0;

// Skeleton in units of roughly one figure height, y pointing down.
// Primitives are listed back to front; later ones win on overlap.
std::vector<Primitive> pose_figure(Rng& rng) {
  const double build = uniform(rng, 0.85, 1.15);
  const double limb = uniform(rng, 0.9, 1.1);
  const Vec2 neck{0.0, 0.2};
  const Vec2 pelvis{0.0, 0.55};
  const double torso_r = 0.095 * build;
  const double arm_r = 0.04 * build;
  const double leg_r = 0.052 * build;

  std::vector<Primitive> prims;
  auto capsule = [&](int part, Vec2 a, Vec2 b, double r) {
    prims.push_back(Primitive{part, false, a, b, r, 0, 0});
  };

  for (int side : {-1, 1}) {
    const Vec2 hip{side * 0.055 * build, 0.55};
    const double thigh_angle = side * uniform(rng, -5.0, 35.0) * kDeg;
    const double knee_bend = side * uniform(rng, -40.0, 5.0) * kDeg;
    const Vec2 knee = hip + down_dir(thigh_angle) * (0.22 * limb);
    const Vec2 ankle = knee + down_dir(thigh_angle + knee_bend) * (0.2 * limb);
    const Vec2 toe = ankle + Vec2{side * 0.06, 0.0};
    capsule(side < 0 ? kLeftThigh : kRightThigh, hip, knee, leg_r);
    capsule(side < 0 ? kLeftShin : kRightShin, knee, ankle, leg_r * 0.85);
    capsule(side < 0 ? kLeftFoot : kRightFoot, ankle, toe, leg_r * 0.6);
  }
  capsule(kTorso, neck + Vec2{0.0, 0.03}, pelvis, torso_r);
  for (int side : {-1, 1}) {
    const Vec2 shoulder{side * (torso_r + 0.01), 0.24};
    const double upper_angle = side * uniform(rng, 8.0, 110.0) * kDeg;
    const double elbow_bend = side * uniform(rng, -20.0, 100.0) * kDeg;
    const Vec2 elbow = shoulder + down_dir(upper_angle) * (0.17 * limb);
    const Vec2 wrist = elbow + down_dir(upper_angle + elbow_bend) * (0.15 * limb);
    capsule(side < 0 ? kLeftUpperArm : kRightUpperArm, shoulder, elbow, arm_r);
    capsule(side < 0 ? kLeftForearm : kRightForearm, elbow, wrist, arm_r * 0.85);
    prims.push_back(Primitive{side < 0 ? kLeftHand : kRightHand, true, wrist, {}, 0, arm_r * 1.1,
                              arm_r * 1.1});
  }
  const double head_tilt = uniform(rng, -0.03, 0.03);
  prims.push_back(Primitive{kHead, true, {head_tilt, 0.1}, {}, 0, 0.065 * build, 0.085});

  // Whole-figure lean about the pelvis.
  const double lean = uniform(rng, -10.0, 10.0) * kDeg;
  const double c = std::cos(lean);
  const double s = std::sin(lean);
  auto rotate = [&](Vec2 p) {
    const Vec2 d = p - pelvis;
    return Vec2{pelvis.x + c * d.x - s * d.y, pelvis.y + s * d.x + c * d.y};
  };
  for (auto& p : prims) {
    p.a = rotate(p.a);
    if (!p.ellipse) p.b = rotate(p.b);
  }
  return prims;
}

struct Rgb {
  double r, g, b;
};

Rgb random_color(Rng& rng, double lo = 0.1, double hi = 0.9) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

float clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

}  // namespace

HumanRecord generate_human(std::uint64_t seed, Size2 size, int part_count) {
  if (size.height < kMinCanvas || size.width < kMinCanvas) {
    throw ValidationError("canvas " + std::to_string(size.height) + "x" + std::to_string(size.width) +
                          " is too small to place a figure (minimum " + std::to_string(kMinCanvas) +
                          ")");
  }
  if (part_count < 2) throw ValidationError("part_count must be >= 2");

  Rng rng(seed);
  std::vector<Primitive> prims = pose_figure(rng);

  double x0 = 1e9, y0 = 1e9, x1 = -1e9, y1 = -1e9;
  for (const auto& p : prims) p.extend(x0, y0, x1, y1);
  const double margin = kFigureMargin + 1.0;
  const double avail_h = size.height - 2 * margin;
  const double avail_w = size.width - 2 * margin;
  const double fit = std::min(avail_h / (y1 - y0), avail_w / (x1 - x0));
  const double scale = fit * uniform(rng, 0.75, 1.0);
  const double slack_y = avail_h - scale * (y1 - y0);
  const double slack_x = avail_w - scale * (x1 - x0);
  const Vec2 offset{margin + uniform(rng, 0.0, slack_x) - scale * x0,
                    margin + uniform(rng, 0.0, slack_y) - scale * y0};
  for (auto& p : prims) p.transform(scale, offset);

  HumanRecord human{ImageTensor(size), BinaryMask(size), ParsingMap(size, part_count)};
  std::vector<std::uint8_t> fine(static_cast<std::size_t>(size.area()), 0);
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      const Vec2 p{x + 0.5, y + 0.5};
      for (const auto& prim : prims) {
        if (prim.contains(p)) fine[static_cast<std::size_t>(y) * size.width + x] = prim.part;
      }
    }
  }

  // Clothing palette: skin for head/forearms/hands, shirt, trousers, shoes.
  const Rgb skin{uniform(rng, 0.45, 0.95), uniform(rng, 0.3, 0.75), uniform(rng, 0.2, 0.6)};
  const Rgb shirt = random_color(rng);
  const Rgb trousers = random_color(rng);
  const Rgb shoes = random_color(rng, 0.05, 0.4);
  const Rgb hair = random_color(rng, 0.05, 0.5);
  const bool long_sleeves = uniform(rng, 0.0, 1.0) < 0.5;
  auto part_color = [&](int part) -> Rgb {
    switch (part) {
      case kHead:
        return skin;
      case kTorso:
      case kLeftUpperArm:
      case kRightUpperArm:
        return shirt;
      case kLeftForearm:
      case kRightForearm:
        return long_sleeves ? shirt : skin;
      case kLeftHand:
      case kRightHand:
        return skin;
      case kLeftFoot:
      case kRightFoot:
        return shoes;
      default:
        return trousers;
    }
  };

  const Rgb bg_a = random_color(rng, 0.0, 1.0);
  const Rgb bg_b = random_color(rng, 0.0, 1.0);
  const double bg_angle = uniform(rng, 0.0, 2 * std::numbers::pi);
  const double diag = std::hypot(size.height, size.width);
  std::uniform_real_distribution<double> noise(-0.04, 0.04);

  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * size.width + x;
      const int part = fine[i];
      Rgb color;
      if (part) {
        color = part_color(part);
        // Hair band on the upper part of the head.
        if (part == kHead && y < prims.back().a.y - 0.35 * prims.back().ry) color = hair;
      } else {
        const double t = 0.5 + 0.5 * ((x - size.width / 2.0) * std::cos(bg_angle) +
                                      (y - size.height / 2.0) * std::sin(bg_angle)) /
                                     (0.5 * diag);
        color = {bg_a.r + (bg_b.r - bg_a.r) * t, bg_a.g + (bg_b.g - bg_a.g) * t,
                 bg_a.b + (bg_b.b - bg_a.b) * t};
      }
      human.image.at(0, y, x) = clamp01(color.r + noise(rng));
      human.image.at(1, y, x) = clamp01(color.g + noise(rng));
      human.image.at(2, y, x) = clamp01(color.b + noise(rng));
      human.amodal.data()[i] = part ? 1 : 0;
      human.parsing.labels()[i] = static_cast<std::uint8_t>(part ? label_for(part, part_count) : 0);
    }
  }
  return human;
}

}  // namespace deocc::datagen
