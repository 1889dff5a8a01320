#pragma once

namespace dipole {
inline constexpr const char* kVersion = "1.0.0";
}
