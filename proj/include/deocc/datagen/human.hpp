#pragma once

#include <cstdint>

#include "deocc/datagen/types.hpp"

namespace deocc::datagen {

inline constexpr int kDefaultPartCount = 7;
inline constexpr int kMinCanvas = 32;
inline constexpr int kFigureMargin = 5;

/// Procedural articulated figure (head, torso, arms, legs, hands, feet)
/// painted with flat-plus-noise textures on a smooth random background.
///
/// Labels: with part_count >= 15 each of the 14 fine segments gets its own
/// label; with part_count >= 7 segments merge into head, torso, left/right
/// arm, left/right leg; smaller counts fold those groups modulo P-1.
/// The figure keeps at least kFigureMargin pixels from every border.
HumanRecord generate_human(std::uint64_t seed, Size2 size, int part_count = kDefaultPartCount);

}  // namespace deocc::datagen
