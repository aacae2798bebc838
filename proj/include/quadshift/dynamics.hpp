#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace quadshift::dynamics {

/// Four-level rotating-frame model of the S1/2 - D5/2 probe with the D5/2
/// Zeeman states dressed by the rf quadrupole field (2 w_z ~ Omega_rf, beta = 0).
///
/// Basis order: |D,5/2>, |D,1/2>, |D,-3/2>, |S,1/2>. In units of rad/s:
///
///   [ -Delta      wQ/sqrt10        0            0     ]
///   [ wQ/sqrt10   0                3wQ/(5sqrt2) O0/2  ]
///   [ 0           3wQ/(5sqrt2)     Delta        0     ]
///   [ 0           O0/2             0            delta ]
///
/// with wQ = epsilon Theta / hbar, Delta = Omega_rf - 2 w_z and delta the
/// probe detuning from the Zeeman-shifted line centre. The off-diagonal
/// quadrupole entries are half the cos amplitudes of H_Q.
struct RwaSystem {
  double omega_Q = 0.0;
  double Omega0 = 0.0;
  double Delta = 0.0;
  double delta = 0.0;
};

enum RwaState : Eigen::Index { kD52 = 0, kD12 = 1, kDm32 = 2, kS12 = 3 };

Eigen::Matrix4d build_rwa_hamiltonian(const RwaSystem& sys);

/// Populations |<k| exp(-i H tau) |initial>|^2 for a time-independent
/// Hermitian H (rad/s), via eigendecomposition.
Eigen::VectorXd propagate(const Eigen::MatrixXcd& H, double tau, Eigen::Index initial);

/// 1 - P_S after a probe of duration tau starting in |S,1/2>.
double transfer_probability(const RwaSystem& sys, double tau);

/// Transfer probability against probe detuning.
struct SpectrumScan {
  std::vector<double> delta;        ///< rad/s, strictly increasing
  std::vector<double> probability;  ///< in [0, 1]
  double tau = 0.0;
};

/// Evenly spaced detunings over [-span, span] (inclusive), `points` >= 2.
std::vector<double> detuning_grid(double span, int points);

/// Default Autler-Townes scan grid: 801 points over +-2 wQ.
std::vector<double> default_grid(double omega_Q);

/// Transfer spectrum over the detuning grid with sys.delta replaced by each
/// grid value. OpenMP-parallel over grid points; output ordering matches the
/// grid and is identical to scan_spectrum_serial.
SpectrumScan scan_spectrum(const RwaSystem& sys, std::span<const double> deltas, double tau);
SpectrumScan scan_spectrum_serial(const RwaSystem& sys, std::span<const double> deltas, double tau);

/// A resolved line of a spectrum.
struct Line {
  double position = 0.0;    ///< parabolic-interpolated detuning
  double height = 0.0;
  double prominence = 0.0;
};

/// Local maxima whose topographic prominence is at least
/// `min_prominence_fraction` of the spectrum maximum. Rabi side lobes of a
/// pi-pulse line stay below ~11% of its peak, so the default keeps only lines.
std::vector<Line> find_lines(const SpectrumScan& scan, double min_prominence_fraction = 0.15);

/// Eigenvalues of the quadrupole-dressed D block (Omega0 = 0), ascending.
Eigen::Vector3d dressed_energies(double omega_Q, double Delta);

}  // namespace quadshift::dynamics
