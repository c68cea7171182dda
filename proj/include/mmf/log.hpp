#pragma once

#include <string>

namespace mmf::log {

// Diagnostic verbosity, selected through the MMF_LOG environment variable
// (one of "error", "info", "debug"). Warnings and errors always print.
enum class Level { error = 0, info = 1, debug = 2 };

Level level();
void set_level(Level lvl);

void error(const std::string& msg);
void warn(const std::string& msg);
void info(const std::string& msg);
void debug(const std::string& msg);

}  // namespace mmf::log
