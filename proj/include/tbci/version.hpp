#pragma once

namespace tbci {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace tbci
