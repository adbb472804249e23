#pragma once

namespace manes {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace manes
