#pragma once

namespace kpp {
inline constexpr const char* kToolName = "kpp-front-lab";
inline constexpr const char* kVersion = "0.1.0";
}  // namespace kpp
