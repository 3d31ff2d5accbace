#pragma once

namespace pcad {

inline constexpr const char* kToolName = "pcad";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace pcad
