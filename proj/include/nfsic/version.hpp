#pragma once

namespace nfsic {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nfsic
