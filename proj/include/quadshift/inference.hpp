#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quadshift/dynamics.hpp"
#include "quadshift/trap.hpp"

namespace quadshift::inference {

/// Quasi-static Gaussian magnetic noise: the field offset b is fixed within
/// one experiment and N(mean_B, sigma_B^2) across experiments. An offset b
/// moves the detunings to Delta - k_Delta b and delta - k_delta b.
struct NoiseModel {
  double sigma_B = 0.0;  ///< tesla
  double mean_B = 0.0;   ///< tesla
  double k_Delta = 0.0;  ///< rad/s per tesla, 2 g_D mu_B / hbar
  double k_delta = 0.0;  ///< rad/s per tesla, (g_D - g_S) mu_B / (2 hbar)

  static NoiseModel from_g_factors(double sigma_B, double g_D, double g_S, bool include_k_delta = true);
  void validate() const;
};

/// Gauss-Hermite rule for integrals against exp(-x^2), weights divided by
/// sqrt(pi) so that they sum to one.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (>= 1).
const HermiteRule& hermite_rule(int order);

struct QuadratureOptions {
  int order = 48;
  double tolerance = 1e-4;
  /// Re-evaluate at twice the order and throw NumericalError if any point
  /// moves by more than `tolerance`.
  bool check_convergence = true;
};

/// Noise-averaged transfer probability
///   P(delta) = E_b[ transfer(delta - k_delta b, Delta - k_Delta b) ].
/// With check_convergence the doubled-order values are returned. sigma_B = 0
/// reduces exactly to dynamics::scan_spectrum. OpenMP-parallel over the grid.
dynamics::SpectrumScan noise_averaged_signal(const dynamics::RwaSystem& sys, const NoiseModel& noise,
                                             std::span<const double> deltas, double tau,
                                             const QuadratureOptions& quad = {});
dynamics::SpectrumScan noise_averaged_signal_serial(const dynamics::RwaSystem& sys, const NoiseModel& noise,
                                                    std::span<const double> deltas, double tau,
                                                    const QuadratureOptions& quad = {});

/// Counts of excited ions at each probe detuning. Counts may be fractional
/// (e.g. exact model expectations).
struct CountsData {
  std::vector<double> delta;   ///< rad/s
  std::vector<double> counts;  ///< excited outcomes
  std::vector<int> shots;      ///< N per point

  void validate() const;
};

/// Everything in the lineshape model except the fitted (omega_Q, sigma_B).
struct ProbeModel {
  double Omega0 = 0.0;  ///< rad/s
  double tau = 0.0;     ///< s
  double Delta = 0.0;   ///< rad/s, nominal rf detuning
  double g_D = 1.2;
  double g_S = 2.0025;
  bool include_k_delta = true;
  int quadrature_order = 48;

  NoiseModel noise(double sigma_B) const;
  void validate() const;
};

/// Model prediction at (omega_Q, sigma_B), fixed quadrature order.
std::vector<double> model_signal(const ProbeModel& model, double omega_Q, double sigma_B,
                                 std::span<const double> deltas);

struct FitOptions {
  /// Search box for omega_Q (rad/s). Unset (hi <= lo) means
  /// [0.1, 1.2] x the largest |delta| of the data.
  double omega_Q_lo = 0.0;
  double omega_Q_hi = 0.0;
  double sigma_max = 100e-9;  ///< tesla
  int grid_omega_Q = 24;
  int grid_sigma = 9;
  int max_iterations = 4000;
  double simplex_tolerance = 1e-10;  ///< simplex size in box-scaled units
  /// Multiplies every binomial variance (sensitivity studies).
  double variance_scale = 1.0;
  /// Inflate errors by sqrt(chi2_nu) when chi2_nu > 1.
  bool scale_errors = true;
};

struct FitResult {
  Measured omega_Q;   ///< rad/s
  Measured sigma_B;   ///< tesla
  double chi2 = 0.0;
  double chi2_reduced = 0.0;
  int n_points = 0;
  int shots_per_point = 0;  ///< common N, or 0 if N varies
  int iterations = 0;
  bool errors_scaled = false;
};

/// chi2 = sum (p_i - P_i)^2 / var_i with var_i = variance_scale *
/// max(P_i (1 - P_i), 1/(4 N_i)) / N_i, minimised over (omega_Q, sigma_B) by
/// a coarse grid followed by Nelder-Mead. Errors come from the Gauss-Newton
/// covariance at the optimum. Throws NumericalError on non-convergence or a
/// singular covariance.
FitResult fit_spectrum(const CountsData& data, const ProbeModel& model, const FitOptions& opts = {});

/// chi2 of the data at given parameters, as minimised by fit_spectrum.
double chi_square(const CountsData& data, const ProbeModel& model, double omega_Q, double sigma_B,
                  double variance_scale = 1.0);

struct ThetaEstimate {
  Measured theta;  ///< e a0^2
  double rel_error_omega_Q = 0.0;
  double rel_error_omega_s = 0.0;
};

/// Theta = hbar omega_Q sqrt2 e / (m Omega_rf omega_s), relative errors of
/// omega_Q and trap.secular_omega added in quadrature.
ThetaEstimate extract_theta(const Measured& omega_Q, const TrapConfig& trap);

/// Mean of the fitted omega_Q with error sqrt(max_i err_i^2 + drift_error^2).
Measured combine_runs(std::span<const Measured> omega_Q, double drift_error);
Measured combine_runs(std::span<const FitResult> fits, double drift_error);

/// omega_Q error from a mean-field drift drift_B (tesla) given the fractional
/// sensitivity of the fitted omega_Q to the mean field (default 1.4% per 20 nT).
double drift_error_from_field(double omega_Q, double drift_B, double fractional_per_tesla = 0.014 / 20e-9);

/// Binomial(N, P) counts drawn from the noise-averaged model with a
/// mt19937_64 seeded by `seed`.
CountsData synthesize(const ProbeModel& model, double omega_Q, double sigma_B, std::span<const double> deltas,
                      int shots, std::uint64_t seed);

}  // namespace quadshift::inference
