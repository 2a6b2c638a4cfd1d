#include "rainsim/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace rainsim {
namespace {

LogLevel parse_level() {
  const char* env = std::getenv("RAINSIM_LOG");
  if (env == nullptr) return LogLevel::kWarn;
  const std::string value(env);
  if (value == "error") return LogLevel::kError;
  if (value == "warn") return LogLevel::kWarn;
  if (value == "info") return LogLevel::kInfo;
  if (value == "debug") return LogLevel::kDebug;
  return LogLevel::kWarn;
}

const char* level_tag(LogLevel level) {
  switch (level) {
    case LogLevel::kError:
      return "error";
    case LogLevel::kWarn:
      return "warn";
    case LogLevel::kInfo:
      return "info";
    case LogLevel::kDebug:
      return "debug";
  }
  return "?";
}

std::mutex g_log_mutex;

}  // namespace

LogLevel log_level() {
  static const LogLevel level = parse_level();
  return level;
}

void log_message(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  const std::scoped_lock lock(g_log_mutex);
  std::cerr << "[" << level_tag(level) << "] " << message << "\n";
}

}  // namespace rainsim
