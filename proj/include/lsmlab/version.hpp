#pragma once

namespace lsmlab {
inline constexpr const char* kVersion = "0.1.0";
}
