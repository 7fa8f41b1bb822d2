#pragma once

namespace qgame {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qgame
