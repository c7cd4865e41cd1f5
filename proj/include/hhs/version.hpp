#pragma once

namespace hhs {
inline constexpr const char* kVersion = "0.1.0";
}
