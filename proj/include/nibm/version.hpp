#pragma once

namespace nibm {

inline constexpr const char* version = "0.1.0";

}  // namespace nibm
