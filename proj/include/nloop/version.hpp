#pragma once

namespace nloop {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nloop
