#pragma once

namespace slfv {

inline constexpr const char* kVersion = "slfv-lab 0.1.0";

} // namespace slfv
