#pragma once

namespace rainsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rainsim
