#pragma once

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "quadshift/coupling.hpp"
#include "quadshift/trap.hpp"

namespace quadshift {

struct ZeemanConfig {
  double g_F = 0.0;
  double B0 = 0.0;  ///< tesla

  /// Splitting between neighbouring m states, g_F mu_B B0 / hbar (rad/s).
  double omega_z() const;
  /// The field that produces a given neighbouring-state splitting.
  static ZeemanConfig from_splitting(double g_F, double omega_z);
};

/// Modulation index of the rf sideband on |F, m>: the diagonal H_Q
/// amplitude divided by hbar Omega_rf.
double sideband_index(const LevelSpec& level, HalfInt F, HalfInt m, const TrapConfig& trap);

/// <bra|H_Q|ket>/hbar (rad/s) for a resonant channel |dm| in {1, 2}; driven
/// when the Zeeman splitting times |dm| matches Omega_rf.
std::complex<double> resonant_coupling(const LevelSpec& level, const HyperfineState& bra, const HyperfineState& ket,
                                       const TrapConfig& trap);

/// Second-order shift of |F, m> (rad/s) from off-resonant H_Q couplings
/// within F, the quadrupole analogue of the ac Stark shift:
///   -sum_dm |<F,m+dm|H_Q|F,m>|^2 / (2 hbar^2) * w_z dm / ((w_z dm)^2 - Omega_rf^2).
/// Throws NumericalError when | |w_z dm| - Omega_rf | < guard * Omega_rf for a
/// contributing dm.
double offresonant_zeeman_shift(const LevelSpec& level, HalfInt F, HalfInt m, const TrapConfig& trap,
                                const ZeemanConfig& zeeman, double guard = 1e-3);

/// Static-limit shift of |F, 0> in Hz, split by |dm| of the coupled state.
struct ClockShift {
  double total = 0.0;
  std::array<double, 3> by_abs_dm{};  ///< contributions of |dm| = 0, 1, 2
  bool static_limit_ok = true;        ///< Omega_rf < 10% of the nearest splitting
};

/// Shift of the m = 0 clock state of hyperfine level F:
///   h dnu_F = -sum_{dm, F' != F} |<F', dm|H_Q|F, 0>|^2 / (2 (E_F' - E_F)).
/// H_Q elements are cos amplitudes; the 1/2 is the time average of cos^2.
ClockShift clock_shift(const LevelSpec& level, HalfInt F, const TrapConfig& trap);

/// True when Omega_rf / 2pi is below 10% of every hyperfine splitting of the
/// level, where the static-limit clock-shift formula applies.
bool static_limit_valid(const LevelSpec& level, const TrapConfig& trap);

/// Equal-weight mean over all hyperfine levels of the level. Under this
/// average the dm = 0 terms of clock_shift cancel pairwise.
double hyperfine_average(const LevelSpec& level, const std::map<HalfInt, double>& per_F_shift_hz);

/// Orientation factors of the A = 0 couplings: f_k = |D2_{k,2} + D2_{k,-2}|^2
/// for k = 1, 2, and f_0 = (2/3)|D2_{0,2} + D2_{0,-2}|^2 so that all lie in [0, 1].
double orientation_factor(int abs_dm, const angular::EulerAngles& angles);

struct ClockTransition {
  double frequency_hz = 0.0;     ///< optical clock frequency nu
  std::optional<HalfInt> single_F;  ///< unset: hyperfine-averaged clock
};

/// dnu/nu = a (f2 + eta f1) + a0 f0, with a0 = 0 under hyperfine averaging.
struct ShiftDecomposition {
  double a = 0.0;
  double eta = 0.0;
  double a0 = 0.0;
  double f1 = 0.0;  ///< at the trap orientation
  double f2 = 0.0;
  double f0 = 0.0;

  double fractional_shift() const { return a * (f2 + eta * f1) + a0 * f0; }
  double fractional_shift(const angular::EulerAngles& angles) const;
};

/// (a, eta) of the clock transition for a linear trap (A = 0).
ShiftDecomposition shift_decomposition(const LevelSpec& level, const ClockTransition& transition,
                                       const TrapConfig& trap);

/// One point of an orientation scan.
struct OrientationSample {
  double alpha = 0.0;
  double beta = 0.0;
  double fractional_shift = 0.0;
};

/// dnu/nu on an n_alpha x n_beta grid over alpha in [0, pi), beta in [0, pi/2],
/// row-major in alpha. OpenMP-parallel; orientation_scan_serial is the
/// reference with identical output.
std::vector<OrientationSample> orientation_scan(const ShiftDecomposition& d, int n_alpha, int n_beta);
std::vector<OrientationSample> orientation_scan_serial(const ShiftDecomposition& d, int n_alpha, int n_beta);

}  // namespace quadshift
