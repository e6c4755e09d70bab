#pragma once

namespace riplab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace riplab
