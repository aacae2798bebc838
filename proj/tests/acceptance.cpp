// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracle/racah_oracle.hpp"
#include "quadshift/angular.hpp"
#include "quadshift/config.hpp"
#include "quadshift/constants.hpp"
#include "quadshift/coupling.hpp"
#include "quadshift/dynamics.hpp"
#include "quadshift/effects.hpp"
#include "quadshift/floquet.hpp"
#include "quadshift/inference.hpp"
#include "quadshift/trap.hpp"

using namespace quadshift;
using constants::pi;
using constants::two_pi;

namespace {

constexpr double u = constants::atomic_mass_unit;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const config::Species& lutetium() {
  static const config::Species s = config::load_species(QUADSHIFT_SOURCE_DIR "/data/species/lu176.json");
  return s;
}

TrapConfig lu_trap(angular::EulerAngles w = {}) {
  return TrapConfig::ideal_linear(175.9426863 * u, two_pi * 33e6, {two_pi * 1e6, 0.0}, w);
}

Outcome theta_extraction() {
  const TrapConfig trap = TrapConfig::ideal_linear(137.905 * u, two_pi * 20.585e6, {two_pi * 943e3, two_pi * 17e3});
  const auto t = inference::extract_theta({two_pi * 1694.0, two_pi * 35.0}, trap);
  const double dv = std::abs(t.theta.value / 3.229 - 1.0), de = std::abs(t.theta.error / 0.089 - 1.0);
  return {dv <= 5e-3 && de <= 0.10,
          fmt("Theta = %.4f(%.0f) e a0^2, |dTheta|/Theta = %.2e, |d err|/err = %.3f", t.theta.value,
              1e3 * t.theta.error, dv, de)};
}

Outcome coupling_scale() {
  const TrapConfig t = lu_trap();
  const double hz = t.epsilon * 1.77 * constants::quadrupole_unit / constants::hbar / two_pi;
  return {hz >= 1.9e3 && hz <= 2.1e3, fmt("eps Theta / (2 pi hbar) = %.1f Hz", hz)};
}

Outcome resonant_coupling_scale() {
  const LevelSpec& lu = lutetium().level("3D2");
  // alpha = pi/4, beta = pi/2: unit dm = 1 orientation factor.
  const TrapConfig t = lu_trap({pi / 4, pi / 2});
  const double of = orientation_factor(1, t.orientation);
  const double up = std::abs(resonant_coupling(lu, {5, 1}, {5, 0}, t)) / two_pi;
  const double down = std::abs(resonant_coupling(lu, {5, -1}, {5, 0}, t)) / two_pi;
  const bool ok = std::abs(of - 1.0) < 1e-12 && std::abs(up - 140.0) <= 3.0 && std::abs(down - 140.0) <= 3.0;
  return {ok, fmt("|Omega_Q| / 2pi = %.2f Hz (+1), %.2f Hz (-1)", up, down)};
}

Outcome autler_townes() {
  const double wQ = two_pi * 1.7e3;
  const dynamics::RwaSystem s{wQ, 0.05 * wQ, 0.0, 0.0};
  const double tau = pi / s.Omega0;
  const auto grid = dynamics::default_grid(wQ);
  const auto start = std::chrono::steady_clock::now();
  const auto two = dynamics::find_lines(dynamics::scan_spectrum(s, grid, tau));
  dynamics::RwaSystem d = s;
  d.Delta = 0.5 * wQ;
  const auto three = dynamics::find_lines(dynamics::scan_spectrum(d, grid, tau));
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double target = std::sqrt(7.0) / 5.0;
  double worst = 1.0;
  if (two.size() == 2)
    worst = std::max(std::abs(-two[0].position / wQ / target - 1.0), std::abs(two[1].position / wQ / target - 1.0));
  const bool ok = two.size() == 2 && worst <= 0.01 && three.size() == 3 && sec < 10.0;
  return {ok, fmt("Delta=0: %zu lines, worst position error %.2e; Delta=0.5 wQ: %zu lines; two 801-point scans %.3f s",
                  two.size(), worst, three.size(), sec)};
}

Outcome table_one() {
  struct Row {
    const char* term;
    double a;  // 1e-19
    double eta;
  };
  const Row rows[] = {{"3D1", 1.28, -0.199}, {"3D2", -0.90, -0.197}, {"1D2", 2.34e-4, -0.212}};
  bool ok = true;
  std::string detail;
  for (const Row& r : rows) {
    const LevelSpec& level = lutetium().level(r.term);
    const auto d = shift_decomposition(level, {*level.clock_frequency, std::nullopt}, lu_trap());
    const double a = d.a / 1e-19;
    const bool a_ok = std::abs(a / r.a - 1.0) <= 0.05, eta_ok = std::abs(d.eta - r.eta) <= 0.01;
    ok = ok && a_ok && eta_ok;
    detail += fmt("%s a=%.4g (table %.3g)%s eta=%.4f (table %.3f)%s; ", r.term, a, r.a, a_ok ? "" : " MISMATCH", d.eta,
                  r.eta, eta_ok ? "" : " MISMATCH");
  }
  const double beta = std::acos(1.0 / std::sqrt(3.0));
  double worst = 0.0;
  for (int i = 0; i < 720; ++i) {
    const double alpha = pi * i / 360.0;
    const angular::EulerAngles w{alpha, beta};
    worst = std::max(worst, std::abs(orientation_factor(2, w) - 0.2 * orientation_factor(1, w) -
                                     (3.0 + std::cos(4.0 * alpha)) / 10.0));
  }
  ok = ok && worst <= 1e-12;
  detail += fmt("magic-angle identity max deviation %.1e", worst);
  return {ok, detail};
}

Outcome modulation_index() {
  const LevelSpec& lu = lutetium().level("3D2");
  const TrapConfig t = lu_trap({0.0, pi / 2});  // sin^2(beta) cos(2 alpha) = 1
  double worst = 0.0;
  std::string at;
  for (HalfInt F : lu.allowed_F())
    for (int m2 = -F.twice(); m2 <= F.twice(); m2 += 2) {
      const double b = std::abs(sideband_index(lu, F, HalfInt::from_twice(m2), t));
      if (b > worst) {
        worst = b;
        at = "F=" + F.str() + " m=" + HalfInt::from_twice(m2).str();
      }
    }
  return {worst < 1e-4, fmt("max |beta_Q| = %.3e at %s", worst, at.c_str())};
}

// Compact versions of the unit-test property suites.
Outcome property_suites() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::vector<std::string> failed;
  auto require = [&](bool c, const char* what) {
    if (!c && (failed.empty() || failed.back() != what)) failed.push_back(what);
  };
  auto close = [](double x, double r) { return std::abs(x - r) <= 1e-12 * std::abs(r) + 1e-15; };

  // Hermiticity and per-manifold trace.
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (HalfInt I : {HalfInt(0), HalfInt(7)})
    for (HalfInt J : {HalfInt(1), HalfInt(2), half(5)}) {
      LevelSpec level;
      level.term = "probe";
      level.nuclear_spin = I;
      level.J = J;
      level.theta = U(rng);
      TrapConfig t = lu_trap({U(rng), U(rng)});
      t.A = 0.7 * t.epsilon;
      const auto hq = hq_matrix(level, t, level.allowed_F());
      const double scale = hq.amplitude.cwiseAbs().maxCoeff();
      require((hq.amplitude - hq.amplitude.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "H_Q hermiticity");
      for (HalfInt F : level.allowed_F()) {
        std::complex<double> tr = 0.0;
        for (std::size_t i = 0; i < hq.basis.size(); ++i)
          if (hq.basis[i].F == F) tr += hq.amplitude(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
        require(std::abs(tr) <= 1e-12 * scale, "H_Q trace");
      }
    }

  // 3j and 6j against exact rationals, j <= 10.
  std::uniform_int_distribution<int> J2(0, 20);
  for (int n = 0; n < 1000;) {
    const int a = J2(rng), b = J2(rng), c = J2(rng);
    if (!oracle::triad(a, b, c)) continue;
    std::uniform_int_distribution<int> pa(0, a), pb(0, b);
    const int ma = -a + 2 * pa(rng), mb = -b + 2 * pb(rng), mc = -ma - mb;
    if (std::abs(mc) > c) continue;
    const double got = angular::wigner_3j(HalfInt::from_twice(a), HalfInt::from_twice(b), HalfInt::from_twice(c),
                                          HalfInt::from_twice(ma), HalfInt::from_twice(mb), HalfInt::from_twice(mc));
    require(close(got, oracle::three_j(a, b, c, ma, mb, mc)), "3j oracle");
    ++n;
  }
  for (int n = 0; n < 500;) {
    const int a = J2(rng), b = J2(rng), c = J2(rng), d = J2(rng), e = J2(rng), f = J2(rng);
    if (!oracle::triad(a, b, c) || !oracle::triad(a, e, f) || !oracle::triad(d, b, f) || !oracle::triad(d, e, c))
      continue;
    const double got = angular::wigner_6j(HalfInt::from_twice(a), HalfInt::from_twice(b), HalfInt::from_twice(c),
                                          HalfInt::from_twice(d), HalfInt::from_twice(e), HalfInt::from_twice(f));
    require(close(got, oracle::six_j(a, b, c, d, e, f)), "6j oracle");
    ++n;
  }

  // D2 unitarity and closed forms.
  std::uniform_real_distribution<double> ang(-10.0, 10.0);
  const std::complex<double> i1(0.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    const angular::EulerAngles w{ang(rng), ang(rng)};
    const auto D = [&](int r, int m) { return angular::wigner_D2(r, m, w); };
    for (int r = -2; r <= 2; ++r)
      for (int s = -2; s <= 2; ++s) {
        std::complex<double> dot = 0.0;
        for (int m = -2; m <= 2; ++m) dot += D(r, m) * std::conj(D(s, m));
        require(std::abs(dot - (r == s ? 1.0 : 0.0)) < 1e-12, "D2 unitarity");
      }
    const double cb = std::cos(w.beta), sb = std::sin(w.beta), c2a = std::cos(2 * w.alpha), s2a = std::sin(2 * w.alpha);
    require(std::abs(D(0, 0) - (3 * cb * cb - 1) / 2) < 1e-12, "D2 closed forms");
    require(std::abs(D(0, 2) + D(0, -2) - std::sqrt(1.5) * sb * sb * c2a) < 1e-12, "D2 closed forms");
    require(std::abs(D(1, 2) + D(1, -2) - (-sb * cb * c2a - i1 * sb * s2a)) < 1e-12, "D2 closed forms");
    require(std::abs(D(-1, 2) + D(-1, -2) - (sb * cb * c2a - i1 * sb * s2a)) < 1e-12, "D2 closed forms");
    require(std::abs(D(2, 2) + D(2, -2) - ((1 + cb * cb) * c2a / 2 + i1 * cb * s2a)) < 1e-12, "D2 closed forms");
    require(std::abs(D(-2, 2) + D(-2, -2) - ((1 + cb * cb) * c2a / 2 - i1 * cb * s2a)) < 1e-12, "D2 closed forms");
  }

  // Off-resonant shift antisymmetry, I = 0 and I = 7.
  LevelSpec ba;
  ba.term = "D5/2";
  ba.J = half(5);
  ba.theta = 3.229;
  const LevelSpec& lu = lutetium().level("3D2");
  const ZeemanConfig zee = ZeemanConfig::from_splitting(1.0, two_pi * 100e3);
  std::uniform_real_distribution<double> W(0.0, 6.3);
  for (auto [level, F] : {std::pair<const LevelSpec*, HalfInt>{&ba, half(5)}, {&lu, 5}, {&lu, 8}}) {
    const TrapConfig t = lu_trap({W(rng), W(rng)});
    double scale = 0.0;
    std::vector<double> s;
    for (int m2 = -F.twice(); m2 <= F.twice(); m2 += 2) {
      s.push_back(offresonant_zeeman_shift(*level, F, HalfInt::from_twice(m2), t, zee));
      scale = std::max(scale, std::abs(s.back()));
    }
    for (std::size_t k = 0; k < s.size(); ++k)
      require(std::abs(s[k] + s[s.size() - 1 - k]) <= 1e-12 * scale, "off-resonant antisymmetry");
  }

  // dm = 0 cancellation under equal-weight hyperfine averaging.
  for (HalfInt J : {HalfInt(1), HalfInt(2)}) {
    LevelSpec level;
    level.term = "avg";
    level.nuclear_spin = 7;
    level.J = J;
    level.theta = -1.77;
    level.hyperfine_energies = config::hyperfine_energies_from_constants(7, J, 1.3e9, 0.2e9);
    const TrapConfig t = lu_trap({W(rng), W(rng)});
    std::map<HalfInt, double> dm0;
    double scale = 0.0;
    for (HalfInt F : level.allowed_F()) {
      dm0[F] = clock_shift(level, F, t).by_abs_dm[0];
      scale = std::max(scale, std::abs(dm0[F]));
    }
    require(std::abs(hyperfine_average(level, dm0)) <= 1e-12 * scale, "dm=0 cancellation");
  }

  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::string detail = fmt("%.2f s", sec);
  for (const auto& f : failed) detail += "; failed: " + f;
  return {failed.empty() && sec < 60.0, detail};
}

Outcome rwa_validation() {
  const double wQ = two_pi * 1.7e3, rf = two_pi * 20.585e6, tau = 1.2e-3;
  const double Deltas[] = {0.0, 0.25 * wQ, 0.5 * wQ};
  const double deltas[] = {-0.53 * wQ, 0.0, 0.3 * wQ};
  const auto start = std::chrono::steady_clock::now();
  double worst[9] = {};
  bool threw = false;
  std::string err;
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < 9; ++k) {
    try {
      const dynamics::RwaSystem s{wQ, pi / tau, Deltas[k / 3], deltas[k % 3]};
      const Eigen::Vector4d fq = dynamics::d52_probe_populations(s, rf, tau);
      const Eigen::VectorXd rwa =
          dynamics::propagate(dynamics::build_rwa_hamiltonian(s).cast<std::complex<double>>(), tau, dynamics::kS12);
      worst[k] = (fq - rwa).cwiseAbs().maxCoeff();
    } catch (const std::exception& e) {
#pragma omp critical
      {
        threw = true;
        err = e.what();
      }
    }
  }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (threw) return {false, "integration failed: " + err};
  double m = 0.0;
  for (double w : worst) m = std::max(m, w);
  return {m <= 1e-2 && sec < 300.0,
          fmt("3x3 (Delta, delta) grid, wQ/Omega_rf = %.1e: max |dP| = %.2e, %.1f s", wQ / rf, m, sec)};
}

Outcome fit_round_trip() {
  const double wQ = two_pi * 1.70e3, sigma = 18e-9, tau = 1.2e-3;
  inference::ProbeModel pm;
  pm.Omega0 = pi / tau;
  pm.tau = tau;
  const auto grid = dynamics::detuning_grid(2.0 * wQ, 40);
  int recovered = 0, runs = 0;
  std::string misses;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto data = inference::synthesize(pm, wQ, sigma, grid, 300, seed);
    ++runs;
    try {
      const auto r = inference::fit_spectrum(data, pm);
      const double zw = (r.omega_Q.value - wQ) / r.omega_Q.error, zs = (r.sigma_B.value - sigma) / r.sigma_B.error;
      if (std::abs(zw) <= 2.0 && std::abs(zs) <= 2.0)
        ++recovered;
      else
        misses += fmt(" seed %d (z = %.2f, %.2f)", static_cast<int>(seed), zw, zs);
    } catch (const std::exception& e) {
      misses += fmt(" seed %d (%s)", static_cast<int>(seed), e.what());
    }
  }
  const std::vector<Measured> table{{1708, 24}, {1662, 19}, {1713, 16}};
  const Measured c = inference::combine_runs(table, 24.0);
  const bool combine_ok = std::abs(c.value - 1694.0) <= 0.5 && std::abs(c.error - 35.0) <= 1.2;
  const bool coverage_ok = recovered * 100 >= 95 * runs;
  std::string detail = fmt("%d/%d seeds within 2 sigma on both parameters", recovered, runs);
  if (!misses.empty()) detail += " (missed:" + misses + ")";
  detail += fmt("; combined %.1f(%.1f) Hz", c.value, c.error);
  return {coverage_ok && combine_ok, detail};
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 Theta extraction", theta_extraction},
      {"2 coupling scale", coupling_scale},
      {"3 resonant coupling", resonant_coupling_scale},
      {"4 Autler-Townes structure", autler_townes},
      {"5 Lu clock-shift parameters", table_one},
      {"6 modulation index", modulation_index},
      {"7 property suites", property_suites},
      {"8 RWA against explicit drive", rwa_validation},
      {"9 fit round trip", fit_round_trip},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  [%s] %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), sec);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
