#pragma once

namespace circlelab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace circlelab
