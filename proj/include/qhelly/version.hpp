#pragma once

namespace qh {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qh
