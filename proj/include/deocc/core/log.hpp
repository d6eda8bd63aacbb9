#pragma once

#include <sstream>
#include <string>
#include <string_view>

// Thin front for spdlog. Kept out of headers so translation units that see
// libtorch's bundled fmt never include spdlog.
namespace deocc::log {

enum class Level { kDebug, kInfo, kWarn, kError, kOff };

void set_level(Level level);
Level parse_level(const std::string& name);  // debug|info|warn|error|off

void write(Level level, std::string_view message);

template <typename... Parts>
std::string concat(const Parts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

template <typename... Parts>
void debug(const Parts&... parts) { write(Level::kDebug, concat(parts...)); }
template <typename... Parts>
void info(const Parts&... parts) { write(Level::kInfo, concat(parts...)); }
template <typename... Parts>
void warn(const Parts&... parts) { write(Level::kWarn, concat(parts...)); }
template <typename... Parts>
void error(const Parts&... parts) { write(Level::kError, concat(parts...)); }

}  // namespace deocc::log
