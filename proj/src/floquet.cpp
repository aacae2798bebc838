#include "quadshift/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "quadshift/constants.hpp"
#include "quadshift/coupling.hpp"
#include "quadshift/error.hpp"

namespace quadshift::dynamics {
namespace {

namespace odeint = boost::numeric::odeint;
using cplx = std::complex<double>;
using State = std::vector<cplx>;

struct RfTerm {
  Eigen::Index row, col;
  cplx amplitude;
  double frequency;  // E_row - E_col
};

class Rhs {
 public:
  explicit Rhs(const FloquetSystem& sys) : H0_(sys.static_part), rf_(sys.Omega_rf) {
    const Eigen::Index n = sys.rf_amplitude.rows();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (sys.rf_amplitude(i, j) != 0.0)
          terms_.push_back({i, j, sys.rf_amplitude(i, j), sys.frame_energy(i) - sys.frame_energy(j)});
  }

  void operator()(const State& psi, State& dpsi, double t) const {
    const auto n = static_cast<Eigen::Index>(psi.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      cplx acc = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) acc += H0_(i, j) * psi[static_cast<std::size_t>(j)];
      dpsi[static_cast<std::size_t>(i)] = acc;
    }
    const double c = std::cos(rf_ * t);
    for (const RfTerm& term : terms_)
      dpsi[static_cast<std::size_t>(term.row)] +=
          term.amplitude * c * std::polar(1.0, term.frequency * t) * psi[static_cast<std::size_t>(term.col)];
    for (cplx& v : dpsi) v *= cplx(0.0, -1.0);
  }

 private:
  Eigen::MatrixXcd H0_;
  double rf_;
  std::vector<RfTerm> terms_;
};

double norm2(const State& psi) {
  double s = 0.0;
  for (const cplx& v : psi) s += std::norm(v);
  return s;
}

void check_system(const FloquetSystem& sys) {
  const Eigen::Index n = sys.static_part.rows();
  if (n == 0 || sys.static_part.cols() != n || sys.rf_amplitude.rows() != n || sys.rf_amplitude.cols() != n ||
      sys.frame_energy.size() != n)
    throw InvalidInput("floquet: inconsistent system dimensions");
  if (!(sys.Omega_rf > 0.0)) throw InvalidInput("floquet: drive frequency must be positive");
  if (!sys.static_part.isApprox(sys.static_part.adjoint(), 1e-12) ||
      !sys.rf_amplitude.isApprox(sys.rf_amplitude.adjoint(), 1e-12))
    throw InvalidInput("floquet: Hamiltonian blocks must be Hermitian");
}

}  // namespace

Eigen::VectorXcd floquet_evolve(const FloquetSystem& sys, const Eigen::VectorXcd& psi0, double t0, double t1,
                                const FloquetOptions& opts) {
  check_system(sys);
  if (psi0.size() != sys.static_part.rows()) throw InvalidInput("floquet: state dimension mismatch");

  State psi(psi0.data(), psi0.data() + psi0.size());
  if (t1 == t0) return psi0;

  const double n0 = norm2(psi);
  const Rhs rhs(sys);
  auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_fehlberg78<State>());

  const double dir = (t1 > t0) ? 1.0 : -1.0;
  double t = t0;
  double dt = dir * 0.05 / sys.Omega_rf;
  const double min_dt = 1e-6 / sys.Omega_rf;
  std::size_t steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (dir * (t + dt - t1) > 0.0) dt = t1 - t;
    if (steps++ >= opts.max_steps) throw NumericalError("floquet: maximum number of steps exceeded");
    const auto res = stepper.try_step(rhs, psi, t, dt);
    if (res == odeint::fail && std::abs(dt) < min_dt && std::abs(t1 - t) > min_dt)
      throw NumericalError("floquet: step size collapsed at t = " + std::to_string(t));
  }

  const double drift = std::abs(norm2(psi) - n0);
  if (drift > opts.unitarity_tol) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "floquet: norm drift %.3e exceeds tolerance %.1e", drift, opts.unitarity_tol);
    throw NumericalError(msg);
  }
  return Eigen::Map<const Eigen::VectorXcd>(psi.data(), static_cast<Eigen::Index>(psi.size()));
}

Eigen::VectorXd floquet_oracle(const FloquetSystem& sys, double tau, Eigen::Index initial,
                               const FloquetOptions& opts) {
  if (tau < 0.0) throw InvalidInput("floquet: negative evolution time");
  const Eigen::Index n = sys.static_part.rows();
  if (initial < 0 || initial >= n) throw InvalidInput("floquet: initial state index out of range");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
  psi(initial) = 1.0;
  return floquet_evolve(sys, psi, 0.0, tau, opts).cwiseAbs2();
}

D52ProbeModel d52_probe_model(const RwaSystem& sys, double Omega_rf, const FloquetOptions& opts) {
  const double scale = std::max({std::abs(sys.omega_Q), std::abs(sys.Omega0), std::abs(sys.Delta),
                                 std::abs(sys.delta)});
  if (!(Omega_rf > 0.0) || Omega_rf < opts.min_drive_ratio * scale)
    throw InvalidInput("floquet: Omega_rf must be at least " + std::to_string(opts.min_drive_ratio) +
                       " times every coupling and detuning");

  LevelSpec d52;
  d52.term = "D5/2";
  d52.J = half(5);
  d52.theta = 1.0;
  TrapConfig trap;
  trap.drive_omega_rf = Omega_rf;
  trap.ion_mass = 1.0;
  trap.epsilon = sys.omega_Q * constants::hbar / constants::quadrupole_unit;
  const QuadCouplingMatrix hq = hq_matrix(d52, trap, {d52.J});

  const Eigen::Index nd = static_cast<Eigen::Index>(hq.basis.size());
  const Eigen::Index n = nd + 1;
  const Eigen::Index s = nd;
  const double wz = 0.5 * (Omega_rf - sys.Delta);

  D52ProbeModel model;
  FloquetSystem& f = model.system;
  f.Omega_rf = Omega_rf;
  f.static_part = Eigen::MatrixXcd::Zero(n, n);
  f.rf_amplitude = Eigen::MatrixXcd::Zero(n, n);
  f.rf_amplitude.topLeftCorner(nd, nd) = hq.amplitude;
  f.frame_energy = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < nd; ++i)
    f.frame_energy(i) = wz * (hq.basis[static_cast<std::size_t>(i)].m - half(1)).value();

  const auto d = [&](int twice_m) {
    return static_cast<Eigen::Index>(hq.index_of({d52.J, HalfInt::from_twice(twice_m)}));
  };
  const Eigen::Index d12 = d(1);
  f.static_part(s, s) = sys.delta;
  f.static_part(s, d12) = 0.5 * sys.Omega0;
  f.static_part(d12, s) = 0.5 * sys.Omega0;

  model.rwa_index = {d(5), d12, d(-3), s};
  return model;
}

Eigen::Vector4d d52_probe_populations(const RwaSystem& sys, double Omega_rf, double tau, const FloquetOptions& opts) {
  const D52ProbeModel model = d52_probe_model(sys, Omega_rf, opts);
  const Eigen::VectorXd p = floquet_oracle(model.system, tau, model.rwa_index[kS12], opts);
  Eigen::Vector4d out;
  for (int k = 0; k < 4; ++k) out(k) = p(model.rwa_index[static_cast<std::size_t>(k)]);
  return out;
}

}  // namespace quadshift::dynamics
