#pragma once

#include <string_view>

namespace sideband {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kProgramName = "sideband-entangler";

}  // namespace sideband
