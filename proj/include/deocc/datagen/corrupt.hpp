#pragma once

#include <cstdint>

#include "deocc/core/image.hpp"

namespace deocc::datagen {

/// Simulates an off-the-shelf instance segmenter's modal mask.
///
/// Applies, in order: erosion or dilation with a disc of radius
/// max(1, round(3 * severity)) (kernel 3 to 7 px), each changed pixel kept
/// with probability min(1, 0.25 + severity), boundary jitter flipping
/// each edge pixel with probability severity / 2, and up to
/// round(3 * severity) punched holes. Severity 0 returns the input.
BinaryMask corrupt_modal_mask(const BinaryMask& modal, double severity, std::uint64_t rng_seed);

BinaryMask erode(const BinaryMask& mask, int radius);
BinaryMask dilate(const BinaryMask& mask, int radius);

}  // namespace deocc::datagen
