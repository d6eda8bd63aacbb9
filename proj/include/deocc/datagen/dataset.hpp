#pragma once

#include <filesystem>
#include <vector>

#include "deocc/datagen/types.hpp"

namespace deocc::datagen {

inline constexpr int kDatasetFormatVersion = 1;

/// Writes one directory per sample under `root` plus `root/index.json`.
/// Layout and manifest schema: docs/formats.md.
void save_dataset(const std::vector<OcclusionSample>& samples, const std::filesystem::path& root);

// Throws FormatError on a missing or malformed index, manifest or image.
std::vector<OcclusionSample> load_dataset(const std::filesystem::path& root);

void save_sample(const OcclusionSample& sample, const std::filesystem::path& dir);
OcclusionSample load_sample(const std::filesystem::path& dir);

}  // namespace deocc::datagen
