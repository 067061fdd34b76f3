#pragma once

#include <numbers>

namespace odmr::constants {

// CODATA-2018
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double mu0 = 1.25663706212e-6;   // N A^-2

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double pi = std::numbers::pi;

inline constexpr double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / pi; }

}  // namespace odmr::constants
