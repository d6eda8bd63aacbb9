#include "deocc/evalkit/report.hpp"

#include <cstdio>
#include <fstream>

#include "deocc/core/errors.hpp"

namespace deocc::evalkit {

const char* const kFrechetNote =
    "frechet is computed on a frozen random-weight embedding identified by embedding_seed. "
    "It is comparable only between reports of this tool and is not an Inception FID.";

void MetricReport::finalize() {
  aggregate.clear();
  counts.clear();
  std::map<std::string, double> sums;
  for (const auto& s : samples) {
    for (const auto& [k, v] : s.values) {
      sums[k] += v;
      ++counts[k];
    }
  }
  for (const auto& [k, sum] : sums) aggregate[k] = sum / static_cast<double>(counts[k]);
}

nlohmann::json MetricReport::to_json() const {
  nlohmann::json j;
  j["format_version"] = kReportFormatVersion;
  j["note"] = kFrechetNote;
  j["embedding_seed"] = embedding_seed;
  j["config_fingerprint"] = fingerprint;
  j["config"] = config;
  j["count"] = samples.size();
  j["aggregate"] = aggregate;
  j["counts"] = counts;
  j["set_level"] = set_level;
  auto arr = nlohmann::json::array();
  for (const auto& s : samples) {
    arr.push_back({{"index", s.index}, {"seed", s.seed}, {"occlusion_ratio", s.occlusion_ratio}, {"values", s.values}});
  }
  j["samples"] = std::move(arr);
  return j;
}

MetricReport MetricReport::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != kReportFormatVersion) throw FormatError("unsupported report version");
    MetricReport r;
    r.embedding_seed = j.at("embedding_seed").get<std::uint64_t>();
    r.fingerprint = j.at("config_fingerprint").get<std::string>();
    r.config = j.at("config");
    r.aggregate = j.at("aggregate").get<std::map<std::string, double>>();
    r.counts = j.at("counts").get<std::map<std::string, std::size_t>>();
    r.set_level = j.at("set_level").get<std::map<std::string, double>>();
    for (const auto& s : j.at("samples")) {
      SampleEntry e;
      e.index = s.at("index").get<std::size_t>();
      e.seed = s.at("seed").get<std::uint64_t>();
      e.occlusion_ratio = s.at("occlusion_ratio").get<double>();
      e.values = s.at("values").get<std::map<std::string, double>>();
      r.samples.push_back(std::move(e));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
}

std::string fingerprint(const nlohmann::json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_report(const std::filesystem::path& path, const MetricReport& report) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report " + path.string());
  out << report.to_json().dump(2) << '\n';
}

MetricReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open report " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("report is not valid JSON: " + std::string(e.what()));
  }
  return MetricReport::from_json(j);
}

}  // namespace deocc::evalkit
