#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deocc/core/png_io.hpp"
#include "deocc/datagen/types.hpp"

namespace deocc::datagen {

struct IngestResult {
  HumanRecord human;
  std::vector<std::string> warnings;
};

/// Brings an external unoccluded person (image + mask, optional parsing)
/// onto the working canvas: aspect-preserving resize, then centred
/// zero padding. Without parsing, the whole mask becomes part 1.
IngestResult ingest_external(const ImageTensor& image, const BinaryMask& mask,
                             const std::optional<ParsingMap>& parsing, Size2 canvas,
                             int part_count);

// Accepts gray values {0,1} or {0,255}; anything else is a ValidationError.
BinaryMask mask_from_gray(const png::GrayImage& gray);

}  // namespace deocc::datagen
