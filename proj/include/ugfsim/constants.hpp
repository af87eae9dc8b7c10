#pragma once

namespace ugf::constants {

/// Reduced Planck constant [J s] (CODATA 2018, exact h).
inline constexpr double hbar = 1.054571817e-34;

/// Speed of light in vacuum [m/s] (exact).
inline constexpr double c = 2.99792458e8;

inline constexpr double c2 = c * c;

}  // namespace ugf::constants
