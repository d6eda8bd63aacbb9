#include "deocc/maskcomp/mask_ops.hpp"

#include "deocc/core/errors.hpp"

namespace deocc::maskcomp {

torch::Tensor binarize(const torch::Tensor& soft, double threshold) {
  return (soft.detach() >= threshold).to(soft.scalar_type());
}

torch::Tensor invisible_mask(const torch::Tensor& amodal, const torch::Tensor& modal) {
  if (amodal.sizes() != modal.sizes()) throw ValidationError("invisible_mask: shape mismatch");
  return amodal * (1 - modal);
}

BinaryMask invisible_mask(const BinaryMask& amodal, const BinaryMask& modal) {
  return mask_and_not(amodal, modal);
}

}  // namespace deocc::maskcomp
