#include "quadshift/trap.hpp"

#include <cmath>
#include <numbers>

#include "quadshift/constants.hpp"
#include "quadshift/error.hpp"

namespace quadshift {

double epsilon_from_secular(double mass, double omega_rf, double omega_s) {
  if (!(mass > 0.0) || !(omega_rf > 0.0) || !(omega_s > 0.0))
    throw InvalidInput("epsilon_from_secular: mass, drive and secular frequency must be positive");
  return mass * omega_rf * omega_s / (constants::elementary_charge * std::numbers::sqrt2);
}

double secular_from_epsilon(double mass, double omega_rf, double epsilon) {
  if (!(mass > 0.0) || !(omega_rf > 0.0) || !(epsilon > 0.0))
    throw InvalidInput("secular_from_epsilon: mass, drive and epsilon must be positive");
  return epsilon * constants::elementary_charge * std::numbers::sqrt2 / (mass * omega_rf);
}

SecularEstimate secular_consistency(double omega_x, double omega_y, double omega_z) {
  if (!(omega_x > 0.0) || !(omega_y > 0.0) || omega_z < 0.0)
    throw InvalidInput("secular_consistency: trap frequencies must be positive");
  const double asym = omega_z - (omega_x - omega_y);
  return {{0.5 * (omega_x + omega_y), std::abs(asym)}, asym};
}

TrapConfig TrapConfig::ideal_linear(double mass, double omega_rf, Measured omega_s, angular::EulerAngles angles) {
  TrapConfig t;
  t.drive_omega_rf = omega_rf;
  t.secular_omega = omega_s;
  t.ion_mass = mass;
  t.A = 0.0;
  t.epsilon = epsilon_from_secular(mass, omega_rf, omega_s.value);
  t.orientation = angles;
  return t;
}

TrapConfig TrapConfig::ideal_quadrupole(double mass, double omega_rf, Measured omega_s, angular::EulerAngles angles) {
  TrapConfig t;
  t.drive_omega_rf = omega_rf;
  t.secular_omega = omega_s;
  t.ion_mass = mass;
  t.A = epsilon_from_secular(mass, omega_rf, omega_s.value);
  t.epsilon = 0.0;
  t.orientation = angles;
  return t;
}

void TrapConfig::validate() const {
  if (!(drive_omega_rf > 0.0)) throw InvalidInput("trap drive frequency must be positive");
  if (!(ion_mass > 0.0)) throw InvalidInput("ion mass must be positive");
  if (!std::isfinite(A) || !std::isfinite(epsilon)) throw InvalidInput("trap field gradients must be finite");
}

}  // namespace quadshift
