#pragma once

namespace jointorbit {
inline constexpr const char* kVersion = "0.1.0";
}
