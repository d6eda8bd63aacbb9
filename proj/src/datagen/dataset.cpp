#include "deocc/datagen/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "deocc/core/errors.hpp"
#include "deocc/core/png_io.hpp"

namespace deocc::datagen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kOccluded = "occluded.png";
constexpr const char* kFull = "full.png";
constexpr const char* kInitial = "initial_mask.png";
constexpr const char* kModal = "modal_mask.png";
constexpr const char* kAmodal = "amodal_mask.png";
constexpr const char* kOccluder = "occluder_mask.png";
constexpr const char* kModalParsing = "modal_parsing.png";
constexpr const char* kAmodalParsing = "amodal_parsing.png";
constexpr const char* kManifest = "manifest.json";
constexpr const char* kIndex = "index.json";

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("missing manifest " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("corrupt manifest " + path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string sample_dir_name(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06zu", i);
  return buf;
}

}  // namespace

void save_sample(const OcclusionSample& s, const fs::path& dir) {
  fs::create_directories(dir);
  png::write_rgb(dir / kOccluded, s.occluded_image);
  png::write_rgb(dir / kFull, s.full_image);
  png::write_mask(dir / kInitial, s.initial_mask);
  png::write_mask(dir / kModal, s.modal_mask);
  png::write_mask(dir / kAmodal, s.amodal_mask);
  png::write_mask(dir / kOccluder, s.occluder_mask);
  png::write_labels(dir / kModalParsing, s.modal_parsing);
  png::write_labels(dir / kAmodalParsing, s.amodal_parsing);
  const json manifest = {
      {"format_version", kDatasetFormatVersion},
      {"seed", s.seed},
      {"occlusion_ratio", s.occlusion_ratio},
      {"part_count", s.part_count()},
      {"split", to_string(s.split)},
      {"height", s.size().height},
      {"width", s.size().width},
  };
  write_json(dir / kManifest, manifest);
}

OcclusionSample load_sample(const fs::path& dir) {
  const json m = read_json(dir / kManifest);
  OcclusionSample s;
  int part_count = 0;
  Size2 size;
  try {
    if (m.at("format_version").get<int>() != kDatasetFormatVersion) {
      throw FormatError("unsupported sample format_version in " + (dir / kManifest).string());
    }
    s.seed = m.at("seed").get<std::uint64_t>();
    s.occlusion_ratio = m.at("occlusion_ratio").get<double>();
    part_count = m.at("part_count").get<int>();
    s.split = parse_split(m.at("split").get<std::string>());
    size = {m.at("height").get<int>(), m.at("width").get<int>()};
  } catch (const json::exception& e) {
    throw FormatError("corrupt manifest " + (dir / kManifest).string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw FormatError("corrupt manifest " + (dir / kManifest).string() + ": " + e.what());
  }
  s.occluded_image = png::read_rgb(dir / kOccluded);
  s.full_image = png::read_rgb(dir / kFull);
  s.initial_mask = png::read_mask(dir / kInitial);
  s.modal_mask = png::read_mask(dir / kModal);
  s.amodal_mask = png::read_mask(dir / kAmodal);
  s.occluder_mask = png::read_mask(dir / kOccluder);
  s.modal_parsing = png::read_labels(dir / kModalParsing, part_count);
  s.amodal_parsing = png::read_labels(dir / kAmodalParsing, part_count);
  if (s.full_image.size() != size) {
    throw FormatError("image size in " + dir.string() + " disagrees with its manifest");
  }
  try {
    validate_sample(s);
  } catch (const ValidationError& e) {
    throw FormatError("inconsistent sample " + dir.string() + ": " + e.what());
  }
  return s;
}

void save_dataset(const std::vector<OcclusionSample>& samples, const fs::path& root) {
  fs::create_directories(root);
  json names = json::array();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string name = sample_dir_name(i);
    save_sample(samples[i], root / name);
    names.push_back(name);
  }
  json index = {{"format_version", kDatasetFormatVersion},
                {"count", samples.size()},
                {"samples", names}};
  write_json(root / kIndex, index);
}

std::vector<OcclusionSample> load_dataset(const fs::path& root) {
  const json index = read_json(root / kIndex);
  std::vector<OcclusionSample> samples;
  try {
    if (index.at("format_version").get<int>() != kDatasetFormatVersion) {
      throw FormatError("unsupported dataset format_version in " + (root / kIndex).string());
    }
    const auto& names = index.at("samples");
    if (names.size() != index.at("count").get<std::size_t>()) {
      throw FormatError("index count disagrees with its sample list in " + (root / kIndex).string());
    }
    samples.reserve(names.size());
    for (const auto& name : names) samples.push_back(load_sample(root / name.get<std::string>()));
  } catch (const json::exception& e) {
    throw FormatError("corrupt index " + (root / kIndex).string() + ": " + e.what());
  }
  return samples;
}

}  // namespace deocc::datagen
