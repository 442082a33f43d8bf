#pragma once

namespace trimap {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kMapFormatVersion = 1;

}  // namespace trimap
