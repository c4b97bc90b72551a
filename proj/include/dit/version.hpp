#pragma once

namespace dit {

inline constexpr const char* version = "0.1.0";

}  // namespace dit
