#pragma once

namespace uape {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace uape
