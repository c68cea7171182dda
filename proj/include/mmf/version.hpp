#pragma once

namespace mmf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mmf
