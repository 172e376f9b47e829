#pragma once

namespace latsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace latsim
