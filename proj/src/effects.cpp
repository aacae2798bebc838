#include "quadshift/effects.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quadshift/constants.hpp"
#include "quadshift/error.hpp"

namespace quadshift {
namespace {

using std::complex;

// Orientation sum O_k = D2_{k,2} + D2_{k,-2} for the linear-trap coupling.
complex<double> linear_orientation(int dm, const angular::EulerAngles& angles) {
  return angular::wigner_D2(dm, 2, angles) + angular::wigner_D2(dm, -2, angles);
}

void require_state(const LevelSpec& level, HalfInt F, HalfInt m) {
  if (!level.allows_F(F)) throw InvalidInput(level.term + ": F = " + F.str() + " not allowed");
  if (!is_projection(F, m)) throw InvalidInput("m = " + m.str() + " is not a projection of F = " + F.str());
}

void require_hyperfine_data(const LevelSpec& level) {
  for (HalfInt F : level.allowed_F()) (void)level.hyperfine_energy(F);
}

}  // namespace

double ZeemanConfig::omega_z() const { return g_F * constants::bohr_magneton * B0 / constants::hbar; }

ZeemanConfig ZeemanConfig::from_splitting(double g_F, double omega_z) {
  if (g_F == 0.0) throw InvalidInput("Zeeman splitting needs a non-zero g-factor");
  return {g_F, omega_z * constants::hbar / (g_F * constants::bohr_magneton)};
}

double sideband_index(const LevelSpec& level, HalfInt F, HalfInt m, const TrapConfig& trap) {
  require_state(level, F, m);
  trap.validate();
  return hq_element(level, trap, {F, m}, {F, m}).real() / trap.drive_omega_rf;
}

complex<double> resonant_coupling(const LevelSpec& level, const HyperfineState& bra, const HyperfineState& ket,
                                  const TrapConfig& trap) {
  const int dm_twice = std::abs((bra.m - ket.m).twice());
  if (dm_twice != 2 && dm_twice != 4)
    throw InvalidInput("resonant coupling needs |dm| = 1 or 2, got |dm| = " + HalfInt::from_twice(dm_twice).str());
  trap.validate();
  return hq_element(level, trap, bra, ket);
}

double offresonant_zeeman_shift(const LevelSpec& level, HalfInt F, HalfInt m, const TrapConfig& trap,
                                const ZeemanConfig& zeeman, double guard) {
  require_state(level, F, m);
  trap.validate();
  const double wz = zeeman.omega_z();
  const double rf = trap.drive_omega_rf;
  double shift = 0.0;
  for (int dm = -2; dm <= 2; ++dm) {
    if (dm == 0) continue;
    const HalfInt target = m + dm;
    if (!is_projection(F, target)) continue;
    const double coupling2 = std::norm(hq_element(level, trap, {F, target}, {F, m}));
    if (coupling2 == 0.0) continue;
    const double w = wz * dm;
    if (std::abs(std::abs(w) - rf) < guard * rf)
      throw NumericalError("off-resonant shift: |dm| = " + std::to_string(std::abs(dm)) +
                           " Zeeman splitting is within the resonance guard of Omega_rf");
    shift -= 0.5 * coupling2 * w / (w * w - rf * rf);
  }
  return shift;
}

bool static_limit_valid(const LevelSpec& level, const TrapConfig& trap) {
  double min_split = std::numeric_limits<double>::infinity();
  for (auto a = level.hyperfine_energies.begin(); a != level.hyperfine_energies.end(); ++a)
    for (auto b = std::next(a); b != level.hyperfine_energies.end(); ++b)
      min_split = std::min(min_split, std::abs(a->second - b->second));
  return trap.drive_omega_rf / constants::two_pi < 0.1 * min_split;
}

ClockShift clock_shift(const LevelSpec& level, HalfInt F, const TrapConfig& trap) {
  level.validate();
  trap.validate();
  require_state(level, F, 0);
  require_hyperfine_data(level);

  ClockShift out;
  const double EF = level.hyperfine_energy(F);
  for (HalfInt Fp : level.allowed_F()) {
    if (Fp == F) continue;
    const double dE = level.hyperfine_energy(Fp) - EF;
    for (int dm = -2; dm <= 2; ++dm) {
      if (!is_projection(Fp, dm)) continue;
      const double m_hz = std::abs(hq_element(level, trap, {Fp, dm}, {F, 0})) / constants::two_pi;
      const double term = -m_hz * m_hz / (2.0 * dE);
      out.by_abs_dm[static_cast<std::size_t>(std::abs(dm))] += term;
      out.total += term;
    }
  }
  out.static_limit_ok = static_limit_valid(level, trap);
  return out;
}

double hyperfine_average(const LevelSpec& level, const std::map<HalfInt, double>& per_F_shift_hz) {
  const auto Fs = level.allowed_F();
  double sum = 0.0;
  for (HalfInt F : Fs) {
    const auto it = per_F_shift_hz.find(F);
    if (it == per_F_shift_hz.end()) throw InvalidInput("hyperfine_average: missing shift for F = " + F.str());
    sum += it->second;
  }
  if (per_F_shift_hz.size() != Fs.size())
    throw InvalidInput("hyperfine_average: shifts given for F values outside the level");
  return sum / static_cast<double>(Fs.size());
}

double orientation_factor(int abs_dm, const angular::EulerAngles& angles) {
  if (abs_dm < 0 || abs_dm > 2) throw InvalidInput("orientation factor needs |dm| in {0, 1, 2}");
  const double f = std::norm(linear_orientation(abs_dm, angles));
  return abs_dm == 0 ? f * (2.0 / 3.0) : f;
}

double ShiftDecomposition::fractional_shift(const angular::EulerAngles& angles) const {
  return a * (orientation_factor(2, angles) + eta * orientation_factor(1, angles)) + a0 * orientation_factor(0, angles);
}

ShiftDecomposition shift_decomposition(const LevelSpec& level, const ClockTransition& transition,
                                       const TrapConfig& trap) {
  level.validate();
  trap.validate();
  if (trap.A != 0.0) throw InvalidInput("shift_decomposition is defined for a linear trap (A = 0)");
  if (!(transition.frequency_hz > 0.0)) throw InvalidInput("clock frequency must be positive");
  require_hyperfine_data(level);

  // Orientation-free weight of each |dm| channel for one clock level F.
  const double g_hz = trap.epsilon * std::sqrt(2.0 / 3.0) * constants::quadrupole_unit / constants::hbar /
                      constants::two_pi;
  auto weights_for = [&](HalfInt F) {
    std::array<double, 3> w{};
    const double EF = level.hyperfine_energy(F);
    for (HalfInt Fp : level.allowed_F()) {
      if (Fp == F) continue;
      const double dE = level.hyperfine_energy(Fp) - EF;
      for (int dm = -2; dm <= 2; ++dm) {
        if (!is_projection(Fp, dm)) continue;
        const double r = g_hz * reduced_theta_element(level, {Fp, dm}, {F, 0});
        w[static_cast<std::size_t>(std::abs(dm))] -= r * r / (2.0 * dE);
      }
    }
    return w;
  };

  std::array<double, 3> w{};
  if (transition.single_F) {
    w = weights_for(*transition.single_F);
  } else {
    const auto Fs = level.allowed_F();
    for (HalfInt F : Fs) {
      const auto wf = weights_for(F);
      for (std::size_t k = 0; k < 3; ++k) w[k] += wf[k];
    }
    for (double& x : w) x /= static_cast<double>(Fs.size());
  }

  ShiftDecomposition d;
  const double nu = transition.frequency_hz;
  d.a = w[2] / nu;
  d.eta = (w[2] != 0.0) ? w[1] / w[2] : 0.0;
  d.a0 = 1.5 * w[0] / nu;  // |O_0|^2 = (3/2) f0
  d.f0 = orientation_factor(0, trap.orientation);
  d.f1 = orientation_factor(1, trap.orientation);
  d.f2 = orientation_factor(2, trap.orientation);
  return d;
}

namespace {

OrientationSample sample_at(const ShiftDecomposition& d, int i, int j, int n_alpha, int n_beta) {
  const double alpha = constants::pi * i / n_alpha;
  const double beta = (n_beta > 1) ? 0.5 * constants::pi * j / (n_beta - 1) : 0.0;
  return {alpha, beta, d.fractional_shift({alpha, beta})};
}

void check_grid(int n_alpha, int n_beta) {
  if (n_alpha < 1 || n_beta < 1) throw InvalidInput("orientation grid needs at least one point per axis");
}

}  // namespace

std::vector<OrientationSample> orientation_scan(const ShiftDecomposition& d, int n_alpha, int n_beta) {
  check_grid(n_alpha, n_beta);
  std::vector<OrientationSample> out(static_cast<std::size_t>(n_alpha) * static_cast<std::size_t>(n_beta));
#pragma omp parallel for collapse(2) schedule(static)
  for (int i = 0; i < n_alpha; ++i)
    for (int j = 0; j < n_beta; ++j)
      out[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_beta) + static_cast<std::size_t>(j)] =
          sample_at(d, i, j, n_alpha, n_beta);
  return out;
}

std::vector<OrientationSample> orientation_scan_serial(const ShiftDecomposition& d, int n_alpha, int n_beta) {
  check_grid(n_alpha, n_beta);
  std::vector<OrientationSample> out;
  out.reserve(static_cast<std::size_t>(n_alpha) * static_cast<std::size_t>(n_beta));
  for (int i = 0; i < n_alpha; ++i)
    for (int j = 0; j < n_beta; ++j) out.push_back(sample_at(d, i, j, n_alpha, n_beta));
  return out;
}

}  // namespace quadshift
