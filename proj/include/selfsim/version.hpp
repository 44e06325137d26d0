#pragma once

namespace selfsim {

inline constexpr const char* kVersion = "selfsim 1.0.0";

}  // namespace selfsim
