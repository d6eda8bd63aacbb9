#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace deocc::evalkit {

inline constexpr int kReportFormatVersion = 1;
extern const char* const kFrechetNote;

struct SampleEntry {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double occlusion_ratio = 0.0;
  std::map<std::string, double> values;  // a metric is absent when undefined for the sample
};

/// Per-sample metrics plus their means. `aggregate[k]` is the mean of
/// `values[k]` over the samples that define k, summed in sample order.
/// Set-level metrics (Fréchet) are not averages and live apart.
struct MetricReport {
  nlohmann::json config = nlohmann::json::object();
  std::string fingerprint;
  std::uint64_t embedding_seed = 0;
  std::vector<SampleEntry> samples;
  std::map<std::string, double> aggregate;
  std::map<std::string, std::size_t> counts;
  std::map<std::string, double> set_level;

  void finalize();  // recomputes aggregate and counts from samples
  nlohmann::json to_json() const;
  static MetricReport from_json(const nlohmann::json& j);
};

// 16 hex digits of FNV-1a over the compact JSON dump.
std::string fingerprint(const nlohmann::json& config);

void write_report(const std::filesystem::path& path, const MetricReport& report);
MetricReport read_report(const std::filesystem::path& path);

}  // namespace deocc::evalkit
