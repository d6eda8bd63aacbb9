#pragma once

#include <cstdint>

#include "deocc/datagen/types.hpp"

namespace deocc::datagen {

// Textured blob (union of ellipses around a central core) no larger than
// `max_size`. The patch centre is always covered, so the mask is never empty.
Occluder generate_occluder(std::uint64_t seed, Size2 max_size);

}  // namespace deocc::datagen
