#include "wrinkle/log.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>

#include <json.hpp>

namespace wrinkle::log {

namespace {

std::atomic<bool> json_mode{false};
std::atomic<bool> quiet_mode{false};
std::atomic<int> min_level{static_cast<int>(Level::info)};
std::mutex sink_mutex;

const char* level_name(Level level) {
  switch (level) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warn: return "warn";
    case Level::error: return "error";
  }
  return "info";
}

void emit(Level level, std::string_view stage, std::string_view message,
          const double* seconds) {
  if (quiet_mode || static_cast<int>(level) < min_level) return;
  std::string line;
  if (json_mode) {
    nlohmann::json j;
    j["level"] = level_name(level);
    j["stage"] = std::string(stage);
    j["message"] = std::string(message);
    if (seconds) j["seconds"] = *seconds;
    line = j.dump();
  } else {
    line = "[" + std::string(level_name(level)) + "] " + std::string(stage) + ": " +
           std::string(message);
    if (seconds) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), " (%.3fs)", *seconds);
      line += buf;
    }
  }
  std::lock_guard lock(sink_mutex);
  std::fprintf(stderr, "%s\n", line.c_str());
}

}  // namespace

void set_json(bool enabled) { json_mode = enabled; }
void set_min_level(Level level) { min_level = static_cast<int>(level); }
void set_quiet(bool quiet) { quiet_mode = quiet; }

void write(Level level, std::string_view stage, std::string_view message) {
  emit(level, stage, message, nullptr);
}

void write_timed(std::string_view stage, std::string_view message, double seconds) {
  emit(Level::info, stage, message, &seconds);
}

StageTimer::StageTimer(std::string stage, std::string label)
    : stage_(std::move(stage)), label_(std::move(label)),
      start_(std::chrono::steady_clock::now()) {}

StageTimer::~StageTimer() {
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
  const char* outcome = std::uncaught_exceptions() > 0 ? "failed" : "done";
  write_timed(stage_, label_.empty() ? outcome : label_ + " " + outcome, elapsed.count());
}

}  // namespace wrinkle::log
