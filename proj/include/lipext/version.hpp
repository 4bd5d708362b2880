#pragma once

namespace lipext {
inline constexpr const char* tool_name = "lipext";
inline constexpr const char* tool_version = "0.1.0";
} // namespace lipext
