#pragma once

#include <string_view>

namespace promor {

inline constexpr std::string_view kToolName = "promor";
inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace promor
