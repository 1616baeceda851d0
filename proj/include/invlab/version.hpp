#pragma once

namespace invlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace invlab
