#pragma once

namespace lloydspp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lloydspp
