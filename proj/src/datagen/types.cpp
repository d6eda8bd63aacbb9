#include "deocc/datagen/types.hpp"

#include <cmath>

#include "deocc/core/errors.hpp"
#include "deocc/datagen/compose.hpp"

namespace deocc::datagen {

std::string to_string(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "train";
}

Split parse_split(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw ValidationError("unknown split '" + name + "' (expected train, val or test)");
}

void validate_sample(const OcclusionSample& s) {
  const Size2 size = s.full_image.size();
  s.full_image.validate();
  s.occluded_image.validate();
  for (const BinaryMask* m : {&s.initial_mask, &s.modal_mask, &s.amodal_mask, &s.occluder_mask}) {
    m->validate();
    if (m->size() != size) throw ValidationError("sample mask size differs from image size");
  }
  if (s.occluded_image.size() != size) throw ValidationError("occluded/full image size mismatch");
  s.modal_parsing.validate();
  s.amodal_parsing.validate();
  if (s.modal_parsing.size() != size || s.amodal_parsing.size() != size) {
    throw ValidationError("parsing size differs from image size");
  }
  if (s.modal_parsing.part_count() != s.amodal_parsing.part_count()) {
    throw ValidationError("modal and amodal parsing disagree on part_count");
  }
  if (!s.modal_mask.subset_of(s.amodal_mask)) throw ValidationError("modal mask exceeds amodal mask");
  if (s.amodal_parsing.foreground() != s.amodal_mask) {
    throw ValidationError("amodal parsing does not partition the amodal mask");
  }
  if (s.modal_parsing.foreground() != s.modal_mask) {
    throw ValidationError("modal parsing does not partition the modal mask");
  }
  if (std::abs(occlusion_ratio(s.amodal_mask, s.modal_mask) - s.occlusion_ratio) > 1e-9) {
    throw ValidationError("stored occlusion ratio disagrees with the masks");
  }
}

}  // namespace deocc::datagen
