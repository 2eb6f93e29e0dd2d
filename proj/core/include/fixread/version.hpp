#pragma once

namespace fixread {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fixread
