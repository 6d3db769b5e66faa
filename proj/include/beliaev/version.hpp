#pragma once

namespace beliaev {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace beliaev
