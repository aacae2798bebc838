#pragma once

#include "quadshift/angular.hpp"

namespace quadshift {

/// A value with a one-sigma uncertainty, same units for both.
struct Measured {
  double value = 0.0;
  double error = 0.0;
};

/// rf trap description. Frequencies are angular (rad/s), field-gradient
/// strengths A and epsilon in V/m^2 as in the principal-axis potential
/// A(x^2 + y^2 - 2z^2) + epsilon(x^2 - y^2), mass in kg.
struct TrapConfig {
  double drive_omega_rf = 0.0;
  Measured secular_omega{};
  double A = 0.0;
  double epsilon = 0.0;
  double ion_mass = 0.0;
  angular::EulerAngles orientation{};

  /// Ideal linear Paul trap: A = 0, epsilon from the pseudo-potential
  /// frequency.
  static TrapConfig ideal_linear(double mass, double omega_rf, Measured omega_s, angular::EulerAngles angles = {});

  /// Ideal quadrupole trap: epsilon = 0, A from the smaller radial
  /// pseudo-potential frequency.
  static TrapConfig ideal_quadrupole(double mass, double omega_rf, Measured omega_s, angular::EulerAngles angles = {});

  /// Throws InvalidInput unless omega_rf > 0 and mass > 0.
  void validate() const;
};

/// Quadrupole strength of an ideal rf trap, m Omega_rf omega_s / (e sqrt 2).
/// Gives epsilon for the linear trap and A for the quadrupole trap.
double epsilon_from_secular(double mass, double omega_rf, double omega_s);

/// Inverse of epsilon_from_secular.
double secular_from_epsilon(double mass, double omega_rf, double epsilon);

struct SecularEstimate {
  Measured omega_s;   ///< mean radial frequency with the conservative error
  double asymmetry;   ///< omega_z - (omega_x - omega_y), signed
};

/// Pseudo-potential frequency from the measured trap frequencies. For pure
/// rf confinement omega_z = omega_x - omega_y; the discrepancy is used as the
/// uncertainty of the mean radial frequency.
SecularEstimate secular_consistency(double omega_x, double omega_y, double omega_z);

}  // namespace quadshift
