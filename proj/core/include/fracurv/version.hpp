#pragma once

namespace fracurv {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace fracurv
