#pragma once

#include <torch/torch.h>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace deocc::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

using NamedTensors = std::vector<std::pair<std::string, torch::Tensor>>;

/// A set of named tensors plus free-form JSON metadata.
///
/// On-disk layout (all integers little-endian):
///   8 bytes   magic "DEOCCKPT"
///   4 bytes   uint32 format version
///   8 bytes   uint64 header length L
///   L bytes   JSON header: {"format_version", "kind", "metadata",
///             "tensors": [{"name","dtype","shape","offset","nbytes"}]}
///   data      raw row-major tensor bytes; offsets count from here
struct Checkpoint {
  std::string kind;
  nlohmann::json metadata = nlohmann::json::object();
  NamedTensors tensors;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
// Throws FormatError for bad magic, unknown version, or truncated data.
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Parameters followed by buffers, in registration order, as detached copies.
NamedTensors collect_state(const torch::nn::Module& module);
// Names and shapes must match exactly; dtype is converted to the module's.
void restore_state(torch::nn::Module& module, const NamedTensors& state);

}  // namespace deocc::nn
