#include "mmf/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace mmf::log {

namespace {

std::mutex g_mutex;

Level initial_level() {
  const char* env = std::getenv("MMF_LOG");
  if (env == nullptr) return Level::error;
  const std::string value(env);
  if (value == "debug") return Level::debug;
  if (value == "info") return Level::info;
  return Level::error;
}

Level& current_level() {
  static Level lvl = initial_level();
  return lvl;
}

void emit(const char* tag, const std::string& msg) {
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << "[mmf][" << tag << "] " << msg << "\n";
}

}  // namespace

Level level() { return current_level(); }

void set_level(Level lvl) { current_level() = lvl; }

void error(const std::string& msg) { emit("error", msg); }

void warn(const std::string& msg) { emit("warn", msg); }

void info(const std::string& msg) {
  if (level() >= Level::info) emit("info", msg);
}

void debug(const std::string& msg) {
  if (level() >= Level::debug) emit("debug", msg);
}

}  // namespace mmf::log
