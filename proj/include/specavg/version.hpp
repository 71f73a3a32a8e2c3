#pragma once

namespace specavg {

inline constexpr const char* kVersion = "1.0.0";

} // namespace specavg
