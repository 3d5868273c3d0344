#pragma once

namespace magspec {
inline constexpr const char* kVersion = "0.1.0";
}
