#pragma once

#include <chrono>
#include <string>
#include <string_view>

// Minimal stderr logger shared by the library and the CLI. Messages are
// plain text by default, or one JSON object per line in json mode.
namespace wrinkle::log {

enum class Level { debug, info, warn, error };

void set_json(bool enabled);
void set_min_level(Level level);
// Silences everything; used by tests that exercise warning paths.
void set_quiet(bool quiet);

void write(Level level, std::string_view stage, std::string_view message);
// Like write() but attaches a duration field in json mode.
void write_timed(std::string_view stage, std::string_view message, double seconds);

inline void info(std::string_view stage, std::string_view message) {
  write(Level::info, stage, message);
}
inline void warn(std::string_view stage, std::string_view message) {
  write(Level::warn, stage, message);
}
inline void error(std::string_view stage, std::string_view message) {
  write(Level::error, stage, message);
}

// Logs the elapsed wall time of a stage when it goes out of scope.
class StageTimer {
 public:
  explicit StageTimer(std::string stage, std::string label = {});
  ~StageTimer();
  StageTimer(const StageTimer&) = delete;
  StageTimer& operator=(const StageTimer&) = delete;

 private:
  std::string stage_;
  std::string label_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace wrinkle::log
