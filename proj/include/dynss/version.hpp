#pragma once

namespace dynss {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace dynss
