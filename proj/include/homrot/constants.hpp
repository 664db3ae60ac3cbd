#pragma once

#include <numbers>

namespace homrot::constants {

inline constexpr double speed_of_light = 299'792'458.0;  // m/s, exact
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double deg_per_rad = 180.0 / std::numbers::pi;

}  // namespace homrot::constants
