#pragma once

#include <numbers>

namespace gsg {

/// Physical constants in SI units (CODATA 2018).
struct Constants {
  double hbar = 1.054571817e-34;       // J s
  double bohr_magneton = 9.2740100783e-24;  // J/T
  double vacuum_permeability = 1.25663706212e-6;  // T m / A
  double gravitational = 6.67430e-11;  // m^3 / (kg s^2)
  double speed_of_light = 299792458.0;  // m/s
};

inline constexpr Constants codata2018{};

inline constexpr double pi = std::numbers::pi;

}  // namespace gsg
