#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Dense>

#include "quadshift/dynamics.hpp"

namespace quadshift::dynamics {

/// Time-dependent Hamiltonian in an interaction frame (rad/s):
///
///   H(t)_ij = static_part_ij + rf_amplitude_ij cos(Omega_rf t) exp(i (E_i - E_j) t)
///
/// where E = frame_energy are the level energies removed by the frame.
struct FloquetSystem {
  Eigen::MatrixXcd static_part;
  Eigen::MatrixXcd rf_amplitude;
  Eigen::VectorXd frame_energy;
  double Omega_rf = 0.0;
};

struct FloquetOptions {
  double abs_tol = 1e-15;
  double rel_tol = 1e-15;
  std::size_t max_steps = 200'000'000;
  double unitarity_tol = 1e-9;
  /// Omega_rf must exceed this multiple of every coupling and detuning.
  double min_drive_ratio = 100.0;
};

/// Integrates i d(psi)/dt = H(t) psi from t0 to t1 (t1 < t0 runs backwards)
/// with an adaptive Runge-Kutta-Fehlberg 7(8) stepper. Throws NumericalError
/// if the step size collapses, max_steps is exceeded or the norm drifts by
/// more than unitarity_tol.
Eigen::VectorXcd floquet_evolve(const FloquetSystem& sys, const Eigen::VectorXcd& psi0, double t0, double t1,
                                const FloquetOptions& opts = {});

/// Populations after evolving the basis state `initial` from 0 to tau.
Eigen::VectorXd floquet_oracle(const FloquetSystem& sys, double tau, Eigen::Index initial,
                               const FloquetOptions& opts = {});

/// The S1/2 - D5/2 probe with all six D5/2 Zeeman states and the explicit
/// cos(Omega_rf t) quadrupole drive (A = 0, beta = 0, alpha = 0). The D
/// states are in the frame rotating with their Zeeman energies
/// w_z (m - 1/2), w_z = (Omega_rf - Delta)/2; the laser couples |S> to
/// |D,1/2> with Omega0/2 and |S> sits at delta.
struct D52ProbeModel {
  FloquetSystem system;
  /// Index into the 7-state basis of each RWA state (see RwaState).
  std::array<Eigen::Index, 4> rwa_index{};
};

/// Throws InvalidInput when Omega_rf is below opts.min_drive_ratio times the
/// largest coupling or detuning.
D52ProbeModel d52_probe_model(const RwaSystem& sys, double Omega_rf, const FloquetOptions& opts = {});

/// floquet_oracle populations of the model, mapped onto the RWA basis order.
Eigen::Vector4d d52_probe_populations(const RwaSystem& sys, double Omega_rf, double tau,
                                      const FloquetOptions& opts = {});

}  // namespace quadshift::dynamics
