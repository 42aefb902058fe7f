#pragma once

namespace beamsculpt {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace beamsculpt
