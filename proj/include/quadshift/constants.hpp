#pragma once

#include <numbers>

/// CODATA 2018 values, SI units.
namespace quadshift::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double hbar = 1.054571817e-34;              // J s
inline constexpr double planck = 6.62607015e-34;             // J s
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double bohr_radius = 5.29177210903e-11;     // m
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double bohr_magneton = 9.2740100783e-24;    // J/T

/// e a0^2, the unit in which quadrupole moments are quoted.
inline constexpr double quadrupole_unit = elementary_charge * bohr_radius * bohr_radius;

}  // namespace quadshift::constants
