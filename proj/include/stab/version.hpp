#pragma once

namespace stab {

inline constexpr const char* kToolName = "embstab";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace stab
