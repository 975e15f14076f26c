#pragma once

namespace snrlab {

inline constexpr const char* version = "0.1.0";

}  // namespace snrlab
