#include "quadshift/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>

#include <gsl/gsl_integration.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "quadshift/constants.hpp"
#include "quadshift/error.hpp"

namespace quadshift::inference {
namespace {

using dynamics::RwaSystem;
using dynamics::SpectrumScan;

double averaged_point(const RwaSystem& sys, const NoiseModel& noise, double delta, double tau,
                      const HermiteRule& rule) {
  const double spread = std::sqrt(2.0) * noise.sigma_B;
  double acc = 0.0;
  for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
    const double b = noise.mean_B + spread * rule.nodes[n];
    RwaSystem s = sys;
    s.delta = delta - noise.k_delta * b;
    s.Delta = sys.Delta - noise.k_Delta * b;
    acc += rule.weights[n] * dynamics::transfer_probability(s, tau);
  }
  return std::clamp(acc, 0.0, 1.0);
}

void check_signal_args(const NoiseModel& noise, std::span<const double> deltas, double tau,
                       const QuadratureOptions& quad) {
  noise.validate();
  if (quad.order < 8) throw InvalidInput("noise averaging needs quadrature order >= 8");
  if (deltas.empty()) throw InvalidInput("noise averaging: empty detuning grid");
  if (tau < 0.0) throw InvalidInput("noise averaging: negative probe time");
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (!(deltas[i] > deltas[i - 1])) throw InvalidInput("noise averaging: detuning grid must be strictly increasing");
}

void check_converged(const std::vector<double>& lo, const std::vector<double>& hi, const QuadratureOptions& quad) {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (std::abs(lo[i] - hi[i]) > quad.tolerance)
      throw NumericalError("noise averaging not converged: order " + std::to_string(quad.order) + " and " +
                           std::to_string(2 * quad.order) + " differ by " + std::to_string(std::abs(lo[i] - hi[i])) +
                           " at point " + std::to_string(i));
  }
}

template <bool Parallel>
SpectrumScan averaged_scan(const RwaSystem& sys, const NoiseModel& noise, std::span<const double> deltas, double tau,
                           const QuadratureOptions& quad) {
  check_signal_args(noise, deltas, tau, quad);
  if (noise.sigma_B == 0.0 && noise.mean_B == 0.0)
    return Parallel ? dynamics::scan_spectrum(sys, deltas, tau) : dynamics::scan_spectrum_serial(sys, deltas, tau);

  const HermiteRule& base = hermite_rule(quad.order);
  const HermiteRule& fine = hermite_rule(2 * quad.order);
  const auto n = static_cast<std::ptrdiff_t>(deltas.size());
  std::vector<double> lo(deltas.size()), hi(deltas.size());

  if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      hi[k] = averaged_point(sys, noise, deltas[k], tau, quad.check_convergence ? fine : base);
      if (quad.check_convergence) lo[k] = averaged_point(sys, noise, deltas[k], tau, base);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      hi[k] = averaged_point(sys, noise, deltas[k], tau, quad.check_convergence ? fine : base);
      if (quad.check_convergence) lo[k] = averaged_point(sys, noise, deltas[k], tau, base);
    }
  }
  if (quad.check_convergence) check_converged(lo, hi, quad);

  SpectrumScan out;
  out.tau = tau;
  out.delta.assign(deltas.begin(), deltas.end());
  out.probability = std::move(hi);
  return out;
}

}  // namespace

NoiseModel NoiseModel::from_g_factors(double sigma_B, double g_D, double g_S, bool include_k_delta) {
  NoiseModel m;
  m.sigma_B = sigma_B;
  const double mu = constants::bohr_magneton / constants::hbar;
  m.k_Delta = 2.0 * g_D * mu;
  m.k_delta = include_k_delta ? (g_D - g_S) * mu / 2.0 : 0.0;
  return m;
}

void NoiseModel::validate() const {
  if (!(sigma_B >= 0.0) || !std::isfinite(sigma_B)) throw InvalidInput("noise sigma_B must be finite and >= 0");
  if (!std::isfinite(mean_B) || !std::isfinite(k_Delta) || !std::isfinite(k_delta))
    throw InvalidInput("noise model parameters must be finite");
}

const HermiteRule& hermite_rule(int order) {
  if (order < 1) throw InvalidInput("Gauss-Hermite order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<HermiteRule>> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    const auto n = static_cast<std::size_t>(order);
    gsl_integration_fixed_workspace* w =
        gsl_integration_fixed_alloc(gsl_integration_fixed_hermite, n, 0.0, 1.0, 0.0, 0.0);
    if (w == nullptr) throw NumericalError("could not build Gauss-Hermite rule of order " + std::to_string(order));
    auto rule = std::make_unique<HermiteRule>();
    const double* x = gsl_integration_fixed_nodes(w);
    const double* wt = gsl_integration_fixed_weights(w);
    rule->nodes.assign(x, x + n);
    rule->weights.assign(wt, wt + n);
    gsl_integration_fixed_free(w);
    for (double& v : rule->weights) v /= std::sqrt(constants::pi);
    slot = std::move(rule);
  }
  return *slot;
}

SpectrumScan noise_averaged_signal(const RwaSystem& sys, const NoiseModel& noise, std::span<const double> deltas,
                                   double tau, const QuadratureOptions& quad) {
  return averaged_scan<true>(sys, noise, deltas, tau, quad);
}

SpectrumScan noise_averaged_signal_serial(const RwaSystem& sys, const NoiseModel& noise,
                                          std::span<const double> deltas, double tau, const QuadratureOptions& quad) {
  return averaged_scan<false>(sys, noise, deltas, tau, quad);
}

void CountsData::validate() const {
  if (delta.size() != counts.size() || delta.size() != shots.size())
    throw InvalidInput("counts data: delta, counts and shots must have equal length");
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (!std::isfinite(delta[i])) throw InvalidInput("counts data: non-finite detuning");
    if (shots[i] < 1) throw InvalidInput("counts data: shots must be >= 1 at every point");
    if (!(counts[i] >= 0.0) || counts[i] > shots[i])
      throw InvalidInput("counts data: counts must lie in [0, shots] at point " + std::to_string(i));
  }
  for (std::size_t i = 1; i < delta.size(); ++i)
    if (!(delta[i] > delta[i - 1])) throw InvalidInput("counts data: detunings must be strictly increasing");
}

NoiseModel ProbeModel::noise(double sigma_B) const {
  return NoiseModel::from_g_factors(std::abs(sigma_B), g_D, g_S, include_k_delta);
}

void ProbeModel::validate() const {
  if (!(Omega0 > 0.0)) throw InvalidInput("probe model: Omega0 must be positive");
  if (!(tau > 0.0)) throw InvalidInput("probe model: tau must be positive");
  if (quadrature_order < 8) throw InvalidInput("probe model: quadrature order must be >= 8");
  if (!std::isfinite(Delta) || !std::isfinite(g_D) || !std::isfinite(g_S))
    throw InvalidInput("probe model: parameters must be finite");
}

std::vector<double> model_signal(const ProbeModel& model, double omega_Q, double sigma_B,
                                 std::span<const double> deltas) {
  const RwaSystem sys{omega_Q, model.Omega0, model.Delta, 0.0};
  const NoiseModel noise = model.noise(sigma_B);
  const HermiteRule& rule = hermite_rule(model.quadrature_order);
  std::vector<double> out(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) out[i] = averaged_point(sys, noise, deltas[i], model.tau, rule);
  return out;
}

namespace {

double point_variance(double p, int shots, double scale) {
  const double n = static_cast<double>(shots);
  return scale * std::max(p * (1.0 - p), 1.0 / (4.0 * n)) / n;
}

double chi2_of(const CountsData& data, const std::vector<double>& model, double scale) {
  double chi2 = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const double p = data.counts[i] / data.shots[i];
    const double r = p - model[i];
    chi2 += r * r / point_variance(model[i], data.shots[i], scale);
  }
  return chi2;
}

struct Objective {
  const CountsData* data;
  const ProbeModel* model;
  double w_lo, w_span, s_span, scale;

  double omega(double u) const { return w_lo + w_span * u; }
  double sigma(double v) const { return std::abs(s_span * v); }
  double operator()(double u, double v) const {
    return chi2_of(*data, model_signal(*model, omega(u), sigma(v), data->delta), scale);
  }
};

double gsl_objective(const gsl_vector* x, void* params) {
  const auto* obj = static_cast<const Objective*>(params);
  return (*obj)(gsl_vector_get(x, 0), gsl_vector_get(x, 1));
}

}  // namespace

double chi_square(const CountsData& data, const ProbeModel& model, double omega_Q, double sigma_B,
                  double variance_scale) {
  data.validate();
  model.validate();
  return chi2_of(data, model_signal(model, omega_Q, sigma_B, data.delta), variance_scale);
}

FitResult fit_spectrum(const CountsData& data, const ProbeModel& model, const FitOptions& opts) {
  data.validate();
  model.validate();
  const auto n = static_cast<int>(data.delta.size());
  if (n < 8) throw InvalidInput("fit_spectrum needs at least 8 data points");
  if (!(opts.variance_scale > 0.0)) throw InvalidInput("fit_spectrum: variance scale must be positive");
  if (opts.grid_omega_Q < 2 || opts.grid_sigma < 2) throw InvalidInput("fit_spectrum: grid needs >= 2 points per axis");
  if (!(opts.sigma_max > 0.0)) throw InvalidInput("fit_spectrum: sigma_max must be positive");

  double w_lo = opts.omega_Q_lo, w_hi = opts.omega_Q_hi;
  if (!(w_hi > w_lo)) {
    double span = 0.0;
    for (double d : data.delta) span = std::max(span, std::abs(d));
    w_lo = 0.1 * span;
    w_hi = 1.2 * span;
  }
  if (!(w_lo > 0.0)) throw InvalidInput("fit_spectrum: omega_Q search range must be positive");
  const Objective obj{&data, &model, w_lo, w_hi - w_lo, opts.sigma_max, opts.variance_scale};

  // Coarse grid.
  const int gw = opts.grid_omega_Q, gs = opts.grid_sigma;
  std::vector<double> grid(static_cast<std::size_t>(gw * gs));
#pragma omp parallel for collapse(2) schedule(dynamic)
  for (int i = 0; i < gw; ++i)
    for (int j = 0; j < gs; ++j)
      grid[static_cast<std::size_t>(i * gs + j)] = obj(static_cast<double>(i) / (gw - 1), static_cast<double>(j) / (gs - 1));
  const auto best = static_cast<int>(std::min_element(grid.begin(), grid.end()) - grid.begin());
  const double u0 = static_cast<double>(best / gs) / (gw - 1);
  const double v0 = static_cast<double>(best % gs) / (gs - 1);

  // Nelder-Mead refinement.
  gsl_multimin_function fn{&gsl_objective, 2, const_cast<Objective*>(&obj)};
  gsl_vector* x = gsl_vector_alloc(2);
  gsl_vector* step = gsl_vector_alloc(2);
  gsl_vector_set(x, 0, u0);
  gsl_vector_set(x, 1, v0);
  gsl_vector_set(step, 0, 0.5 / (gw - 1));
  gsl_vector_set(step, 1, 0.5 / (gs - 1));
  gsl_multimin_fminimizer* nm = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
  gsl_multimin_fminimizer_set(nm, &fn, x, step);
  int iter = 0;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && iter < opts.max_iterations) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(nm) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(nm), opts.simplex_tolerance);
  }
  const double u = gsl_vector_get(nm->x, 0);
  const double v = gsl_vector_get(nm->x, 1);
  const double chi2 = nm->fval;
  gsl_multimin_fminimizer_free(nm);
  gsl_vector_free(x);
  gsl_vector_free(step);
  if (status != GSL_SUCCESS)
    throw NumericalError("fit_spectrum: simplex did not converge in " + std::to_string(iter) + " iterations");

  FitResult r;
  r.omega_Q.value = obj.omega(u);
  r.sigma_B.value = obj.sigma(v);
  r.chi2 = chi2;
  r.n_points = n;
  r.chi2_reduced = chi2 / (n - 2);
  r.iterations = iter;
  r.shots_per_point = data.shots.front();
  for (int s : data.shots)
    if (s != r.shots_per_point) r.shots_per_point = 0;

  // Gauss-Newton covariance with the variances frozen at the optimum.
  const std::vector<double> best_model = model_signal(model, r.omega_Q.value, r.sigma_B.value, data.delta);
  ProbeModel doubled = model;
  doubled.quadrature_order = 2 * model.quadrature_order;
  const std::vector<double> check = model_signal(doubled, r.omega_Q.value, r.sigma_B.value, data.delta);
  for (std::size_t i = 0; i < check.size(); ++i)
    if (std::abs(check[i] - best_model[i]) > 1e-4)
      throw NumericalError("fit_spectrum: noise average not converged at the optimum, raise the quadrature order");

  std::vector<double> inv_sd(best_model.size());
  for (std::size_t i = 0; i < best_model.size(); ++i)
    inv_sd[i] = 1.0 / std::sqrt(point_variance(best_model[i], data.shots[i], opts.variance_scale));

  const double h_w = 1e-4 * r.omega_Q.value;
  const double h_s = 1e-3 * std::max(r.sigma_B.value, 0.05 * opts.sigma_max);
  // One-sided in sigma near zero, where the model is even in sigma.
  const double s_lo = std::max(0.0, r.sigma_B.value - h_s);
  const double s_hi = s_lo + 2.0 * h_s;
  const auto wp = model_signal(model, r.omega_Q.value + h_w, r.sigma_B.value, data.delta);
  const auto wm = model_signal(model, r.omega_Q.value - h_w, r.sigma_B.value, data.delta);
  const auto sp = model_signal(model, r.omega_Q.value, s_hi, data.delta);
  const auto sm = model_signal(model, r.omega_Q.value, s_lo, data.delta);
  Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
  for (std::size_t i = 0; i < best_model.size(); ++i) {
    const Eigen::Vector2d g((wp[i] - wm[i]) / (2.0 * h_w) * inv_sd[i], (sp[i] - sm[i]) / (s_hi - s_lo) * inv_sd[i]);
    jtj += g * g.transpose();
  }
  const Eigen::Vector2d d = jtj.diagonal().cwiseSqrt();
  if (!(d.minCoeff() > 0.0)) throw NumericalError("fit_spectrum: a parameter has no effect on the model at the optimum");
  const Eigen::Matrix2d corr = d.cwiseInverse().asDiagonal() * jtj * d.cwiseInverse().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(corr);
  if (es.info() != Eigen::Success || !(es.eigenvalues()(0) > 1e-10))
    throw NumericalError("fit_spectrum: singular covariance at the optimum");
  const Eigen::Matrix2d cov = jtj.inverse();
  double inflate = 1.0;
  if (opts.scale_errors && r.chi2_reduced > 1.0) {
    inflate = std::sqrt(r.chi2_reduced);
    r.errors_scaled = true;
  }
  r.omega_Q.error = std::sqrt(cov(0, 0)) * inflate;
  r.sigma_B.error = std::sqrt(cov(1, 1)) * inflate;
  return r;
}

ThetaEstimate extract_theta(const Measured& omega_Q, const TrapConfig& trap) {
  trap.validate();
  const Measured& ws = trap.secular_omega;
  if (!(omega_Q.value > 0.0) || !(ws.value > 0.0))
    throw InvalidInput("extract_theta: omega_Q and the secular frequency must be positive");
  if (omega_Q.error < 0.0 || ws.error < 0.0) throw InvalidInput("extract_theta: uncertainties must be >= 0");

  const double eps = epsilon_from_secular(trap.ion_mass, trap.drive_omega_rf, ws.value);
  ThetaEstimate est;
  est.theta.value = constants::hbar * omega_Q.value / eps / constants::quadrupole_unit;
  est.rel_error_omega_Q = omega_Q.error / omega_Q.value;
  est.rel_error_omega_s = ws.error / ws.value;
  est.theta.error = est.theta.value * std::hypot(est.rel_error_omega_Q, est.rel_error_omega_s);
  return est;
}

Measured combine_runs(std::span<const Measured> omega_Q, double drift_error) {
  if (omega_Q.empty()) throw InvalidInput("combine_runs needs at least one fit");
  if (drift_error < 0.0) throw InvalidInput("combine_runs: drift error must be >= 0");
  double sum = 0.0, max_err = 0.0;
  for (const Measured& m : omega_Q) {
    sum += m.value;
    max_err = std::max(max_err, m.error);
  }
  return {sum / static_cast<double>(omega_Q.size()), std::hypot(max_err, drift_error)};
}

Measured combine_runs(std::span<const FitResult> fits, double drift_error) {
  std::vector<Measured> w;
  w.reserve(fits.size());
  for (const FitResult& f : fits) w.push_back(f.omega_Q);
  return combine_runs(std::span<const Measured>(w), drift_error);
}

double drift_error_from_field(double omega_Q, double drift_B, double fractional_per_tesla) {
  if (drift_B < 0.0 || fractional_per_tesla < 0.0) throw InvalidInput("drift bound and sensitivity must be >= 0");
  return std::abs(omega_Q) * fractional_per_tesla * drift_B;
}

CountsData synthesize(const ProbeModel& model, double omega_Q, double sigma_B, std::span<const double> deltas,
                      int shots, std::uint64_t seed) {
  model.validate();
  if (shots < 1) throw InvalidInput("synthesize: shots must be >= 1");
  QuadratureOptions quad;
  quad.order = model.quadrature_order;
  const SpectrumScan p =
      noise_averaged_signal_serial({omega_Q, model.Omega0, model.Delta, 0.0}, model.noise(sigma_B), deltas, model.tau, quad);

  std::mt19937_64 rng(seed);
  CountsData out;
  out.delta.assign(deltas.begin(), deltas.end());
  out.shots.assign(deltas.size(), shots);
  out.counts.reserve(deltas.size());
  for (double pi : p.probability) {
    std::binomial_distribution<int> draw(shots, pi);
    out.counts.push_back(draw(rng));
  }
  return out;
}

}  // namespace quadshift::inference
