#pragma once

#include <cstdint>
#include <string>

#include "deocc/core/image.hpp"

namespace deocc::datagen {

enum class Split { kTrain, kVal, kTest };

std::string to_string(Split split);
Split parse_split(const std::string& name);

/// An unoccluded person: appearance, amodal mask and part labels.
struct HumanRecord {
  ImageTensor image;
  BinaryMask amodal;
  ParsingMap parsing;
};

/// Textured occluder patch with its support mask (same size as the patch).
struct Occluder {
  ImageTensor patch;
  BinaryMask mask;
};

/// One synthesized occlusion case with all ground truths.
struct OcclusionSample {
  ImageTensor occluded_image;  // I_s
  ImageTensor full_image;      // I_o
  BinaryMask initial_mask;     // M_i, simulated segmenter output
  BinaryMask modal_mask;       // M_m
  BinaryMask amodal_mask;      // M_a
  BinaryMask occluder_mask;    // where the occluder was pasted
  ParsingMap modal_parsing;    // M_m^p
  ParsingMap amodal_parsing;   // M_a^p
  double occlusion_ratio = 0.0;
  std::uint64_t seed = 0;
  Split split = Split::kTrain;

  Size2 size() const { return full_image.size(); }
  int part_count() const { return amodal_parsing.part_count(); }
};

// Checks every structural invariant of a sample; throws ValidationError.
void validate_sample(const OcclusionSample& sample);

}  // namespace deocc::datagen
