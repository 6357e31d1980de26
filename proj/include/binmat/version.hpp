#pragma once

namespace binmat {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace binmat
