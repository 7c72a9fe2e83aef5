#pragma once

namespace fpc {

inline constexpr const char* kToolName = "fpclasso";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace fpc
