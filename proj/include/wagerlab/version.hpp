#pragma once

namespace wagerlab {

inline constexpr const char* k_version = "0.1.0";

}  // namespace wagerlab
