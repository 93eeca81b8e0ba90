#pragma once

namespace qchaos {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qchaos
