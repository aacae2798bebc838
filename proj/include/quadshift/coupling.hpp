#pragma once

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quadshift/angular.hpp"
#include "quadshift/half_int.hpp"
#include "quadshift/trap.hpp"

namespace quadshift {

/// A fine-structure level with (optionally) resolved hyperfine structure.
struct LevelSpec {
  std::string term;
  HalfInt nuclear_spin{0};
  HalfInt J{0};
  double theta = 0.0;  ///< quadrupole moment Theta(J) = <J J|Theta_0|J J>, units of e a0^2
  double g_J = 0.0;
  std::map<HalfInt, double> hyperfine_energies;  ///< F -> E_F / h in Hz
  std::map<HalfInt, double> g_F;                 ///< optional per-F g-factors
  std::optional<double> clock_frequency;         ///< optical frequency from the reference level, Hz

  /// All F in |I - J| .. I + J.
  std::vector<HalfInt> allowed_F() const;
  bool allows_F(HalfInt F) const;

  /// Checks J >= 1, finite Theta, hyperfine F values in range and distinct
  /// energies. Throws InvalidInput.
  void validate() const;

  /// E_F / h in Hz. Throws InvalidInput naming the missing field.
  double hyperfine_energy(HalfInt F) const;
};

struct HyperfineState {
  HalfInt F;
  HalfInt m;
  auto operator<=>(const HyperfineState&) const = default;
};

/// Spherical components of the field-gradient tensor in the principal-axis
/// frame, indexed by q = -2..2.
struct GradientComponents {
  std::array<std::complex<double>, 5> values{};
  std::complex<double> at(int q) const { return values.at(static_cast<std::size_t>(q + 2)); }
};

GradientComponents gradient_components(double A, double epsilon);

/// <(IJ)F' mu'| Theta_q^(2)' |(IJ)F mu> in the laboratory frame for the
/// principal-axis tensor component q, in units of e a0^2 (Theta(J) is
/// included). Uses the IJ-coupling reduction to Theta(J):
///
///   (-1)^(F'+F+I+J+mu') sqrt((2F'+1)(2F+1)) {F F' 2; J J I}
///     (F 2 F'; mu dmu -mu') / (J 2 J; -J 0 J) Theta(J) D2_{dmu,q}
///
/// with dmu = mu' - mu.
std::complex<double> theta_matrix_element(const LevelSpec& level, const HyperfineState& bra,
                                          const HyperfineState& ket, int q, const angular::EulerAngles& angles);

/// The orientation-independent factor of theta_matrix_element, i.e. the
/// element divided by D2_{dmu,q}. Zero outside the selection rules.
double reduced_theta_element(const LevelSpec& level, const HyperfineState& bra, const HyperfineState& ket);

/// Matrix of the quadrupole interaction over a set of hyperfine manifolds.
/// `amplitude(i, j)` is <i|H_Q|j>/hbar in rad/s, the full coefficient of
/// cos(Omega_rf t) (not the rotating-wave half amplitude).
struct QuadCouplingMatrix {
  std::vector<HyperfineState> basis;  ///< sorted by (F, m)
  Eigen::MatrixXcd amplitude;

  std::size_t index_of(const HyperfineState& s) const;
  std::complex<double> element(const HyperfineState& bra, const HyperfineState& ket) const {
    return amplitude(static_cast<Eigen::Index>(index_of(bra)), static_cast<Eigen::Index>(index_of(ket)));
  }
};

/// <bra|H_Q|ket>/hbar in rad/s for H_Q = sum_q gradient_q Theta_q.
std::complex<double> hq_element(const LevelSpec& level, const TrapConfig& trap, const HyperfineState& bra,
                                const HyperfineState& ket);

/// Assembles the H_Q amplitude matrix over the listed F manifolds. An empty
/// manifold list is rejected.
QuadCouplingMatrix hq_matrix(const LevelSpec& level, const TrapConfig& trap, const std::vector<HalfInt>& manifold);

/// Static-shift coefficient C2_{F,m} such that the diagonal q = 0 element is
/// C2 Theta(J) D2_{0,0}. Equals 1 for I = 0 at the stretched state.
double c2_coefficient(const LevelSpec& level, HalfInt F, HalfInt m);

}  // namespace quadshift
