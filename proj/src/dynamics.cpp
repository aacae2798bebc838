#include "quadshift/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "quadshift/error.hpp"

namespace quadshift::dynamics {

Eigen::Matrix4d build_rwa_hamiltonian(const RwaSystem& sys) {
  const double weak = sys.omega_Q / std::sqrt(10.0);
  const double strong = 3.0 * sys.omega_Q / (5.0 * std::sqrt(2.0));
  const double laser = 0.5 * sys.Omega0;
  Eigen::Matrix4d H;
  // clang-format off
  H << -sys.Delta, weak,   0.0,       0.0,
        weak,      0.0,    strong,    laser,
        0.0,       strong, sys.Delta, 0.0,
        0.0,       laser,  0.0,       sys.delta;
  // clang-format on
  return H;
}

Eigen::VectorXd propagate(const Eigen::MatrixXcd& H, double tau, Eigen::Index initial) {
  if (H.rows() != H.cols()) throw InvalidInput("propagate: Hamiltonian must be square");
  if (initial < 0 || initial >= H.rows()) throw InvalidInput("propagate: initial state index out of range");
  if (tau < 0.0) throw InvalidInput("propagate: negative evolution time");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("propagate: eigendecomposition failed");
  const Eigen::MatrixXcd& V = es.eigenvectors();
  Eigen::VectorXcd phases(H.rows());
  for (Eigen::Index k = 0; k < H.rows(); ++k) phases(k) = std::polar(1.0, -es.eigenvalues()(k) * tau);
  const Eigen::VectorXcd psi = V * phases.asDiagonal() * V.row(initial).adjoint();
  return psi.cwiseAbs2();
}

double transfer_probability(const RwaSystem& sys, double tau) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(build_rwa_hamiltonian(sys));
  const auto& V = es.eigenvectors();
  std::complex<double> amp = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double w = V(kS12, k) * V(kS12, k);
    amp += w * std::polar(1.0, -es.eigenvalues()(k) * tau);
  }
  return std::clamp(1.0 - std::norm(amp), 0.0, 1.0);
}

std::vector<double> detuning_grid(double span, int points) {
  if (points < 2) throw InvalidInput("detuning grid needs at least two points");
  if (!(span > 0.0)) throw InvalidInput("detuning grid span must be positive");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = -span + 2.0 * span * i / (points - 1);
  return grid;
}

std::vector<double> default_grid(double omega_Q) { return detuning_grid(2.0 * std::abs(omega_Q), 801); }

namespace {

void check_scan(std::span<const double> deltas, double tau) {
  if (deltas.empty()) throw InvalidInput("scan_spectrum: empty detuning grid");
  if (tau < 0.0) throw InvalidInput("scan_spectrum: negative probe time");
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (!(deltas[i] > deltas[i - 1])) throw InvalidInput("scan_spectrum: detuning grid must be strictly increasing");
}

}  // namespace

SpectrumScan scan_spectrum(const RwaSystem& sys, std::span<const double> deltas, double tau) {
  check_scan(deltas, tau);
  SpectrumScan out;
  out.tau = tau;
  out.delta.assign(deltas.begin(), deltas.end());
  out.probability.resize(deltas.size());
  const auto n = static_cast<std::ptrdiff_t>(deltas.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    RwaSystem s = sys;
    s.delta = deltas[static_cast<std::size_t>(i)];
    out.probability[static_cast<std::size_t>(i)] = transfer_probability(s, tau);
  }
  return out;
}

SpectrumScan scan_spectrum_serial(const RwaSystem& sys, std::span<const double> deltas, double tau) {
  check_scan(deltas, tau);
  SpectrumScan out;
  out.tau = tau;
  out.delta.assign(deltas.begin(), deltas.end());
  out.probability.reserve(deltas.size());
  for (double d : deltas) {
    RwaSystem s = sys;
    s.delta = d;
    out.probability.push_back(transfer_probability(s, tau));
  }
  return out;
}

std::vector<Line> find_lines(const SpectrumScan& scan, double min_prominence_fraction) {
  const auto& p = scan.probability;
  const auto& x = scan.delta;
  std::vector<Line> lines;
  if (p.size() < 3) return lines;
  const double pmax = *std::max_element(p.begin(), p.end());
  if (pmax <= 0.0) return lines;
  const double threshold = min_prominence_fraction * pmax;
  const std::size_t n = p.size();

  for (std::size_t i = 1; i + 1 < n; ++i) {
    // Plateaus count once, at their left edge.
    if (!(p[i] > p[i - 1] && p[i] >= p[i + 1])) continue;

    double left_min = p[i];
    for (std::size_t j = i; j-- > 0;) {
      if (p[j] > p[i]) break;
      left_min = std::min(left_min, p[j]);
    }
    double right_min = p[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (p[j] > p[i]) break;
      right_min = std::min(right_min, p[j]);
    }
    const double prominence = p[i] - std::max(left_min, right_min);
    if (prominence < threshold) continue;

    double pos = x[i];
    const double denom = p[i - 1] - 2.0 * p[i] + p[i + 1];
    if (denom < 0.0) {
      const double shift = 0.5 * (p[i - 1] - p[i + 1]) / denom;
      pos = x[i] + shift * 0.5 * (x[i + 1] - x[i - 1]);
    }
    lines.push_back({pos, p[i], prominence});
  }
  return lines;
}

Eigen::Vector3d dressed_energies(double omega_Q, double Delta) {
  const Eigen::Matrix4d H = build_rwa_hamiltonian({omega_Q, 0.0, Delta, 0.0});
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(H.topLeftCorner<3, 3>().eval(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace quadshift::dynamics
