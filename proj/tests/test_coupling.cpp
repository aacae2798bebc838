#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "oracle/racah_oracle.hpp"
#include "quadshift/constants.hpp"
#include "quadshift/coupling.hpp"
#include "quadshift/error.hpp"

using namespace quadshift;
using std::sqrt;

namespace {

LevelSpec make_level(HalfInt I, HalfInt J, double theta = 1.0) {
  LevelSpec l;
  l.term = "test";
  l.nuclear_spin = I;
  l.J = J;
  l.theta = theta;
  return l;
}

// Trap whose epsilon gives omega_Q = eps Theta / hbar = 1 rad/s for Theta = 1.
TrapConfig unit_trap(double A_scale, double eps_scale, angular::EulerAngles w = {}) {
  TrapConfig t;
  t.drive_omega_rf = 1.0;
  t.ion_mass = 1.0;
  const double unit = constants::hbar / constants::quadrupole_unit;
  t.A = A_scale * unit;
  t.epsilon = eps_scale * unit;
  t.orientation = w;
  return t;
}

// I = 0 element from the oracle: (-1)^(J - mu') (J 2 J; -mu' q mu) / (J 2 J; -J 0 J).
double oracle_I0(int J2, int mup2, int q, int mu2) {
  const int phase = (J2 - mup2) / 2;
  return ((phase % 2 == 0) ? 1.0 : -1.0) * oracle::three_j(J2, 4, J2, -mup2, 2 * q, mu2) /
         oracle::three_j(J2, 4, J2, -J2, 0, J2);
}

}  // namespace

TEST_CASE("gradient components") {
  auto g = gradient_components(0.0, 0.0);
  for (int q = -2; q <= 2; ++q) CHECK(g.at(q) == 0.0);
  g = gradient_components(1.0, 0.0);
  CHECK(g.at(0).real() == -2.0);
  CHECK(g.at(2) == 0.0);
  g = gradient_components(0.0, 1.0);
  CHECK(g.at(2).real() == doctest::Approx(0.816497).epsilon(1e-6));
  CHECK(g.at(-2) == g.at(2));
  CHECK(g.at(1) == 0.0);
  CHECK(g.at(0) == 0.0);
}

TEST_CASE("stretched-state normalisation") {
  const LevelSpec d52 = make_level(0, half(5), 3.2);
  const auto v = theta_matrix_element(d52, {half(5), half(5)}, {half(5), half(5)}, 0, {});
  CHECK(v.real() == doctest::Approx(3.2).epsilon(1e-14));
  CHECK(v.imag() == 0.0);
}

TEST_CASE("I = 0 elements match the 3j oracle") {
  const LevelSpec d52 = make_level(0, half(5));
  for (int mu2 = -5; mu2 <= 5; mu2 += 2)
    for (int mup2 = -5; mup2 <= 5; mup2 += 2)
      for (int q = -2; q <= 2; ++q) {
        if (mup2 - mu2 != 2 * q) continue;
        const auto v = theta_matrix_element(d52, {half(5), HalfInt::from_twice(mup2)}, {half(5), HalfInt::from_twice(mu2)},
                                            q, {});
        CHECK(std::abs(v.real() - oracle_I0(5, mup2, q, mu2)) < 1e-12);
      }
}

TEST_CASE("four-level couplings of D5/2 at beta = 0") {
  const LevelSpec d52 = make_level(0, half(5));
  const TrapConfig trap = unit_trap(0.0, 1.0);
  const double up = std::abs(hq_element(d52, trap, {half(5), half(5)}, {half(5), half(1)}));
  const double down = std::abs(hq_element(d52, trap, {half(5), half(-3)}, {half(5), half(1)}));
  // Twice the rotating-frame entries w_Q/sqrt10 and 3 w_Q/(5 sqrt2).
  CHECK(up == doctest::Approx(2.0 / sqrt(10.0)).epsilon(1e-12));
  CHECK(down == doctest::Approx(6.0 / (5.0 * sqrt(2.0))).epsilon(1e-12));
  const double r = std::abs(theta_matrix_element(d52, {half(5), half(-3)}, {half(5), half(1)}, -2, {})) /
                   std::abs(theta_matrix_element(d52, {half(5), half(5)}, {half(5), half(1)}, 2, {}));
  CHECK(r == doctest::Approx(3.0 / sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("Lu 3D2 F = 5 dm = 1 reduced factor") {
  const LevelSpec lu = make_level(7, 2);
  CHECK(std::abs(reduced_theta_element(lu, {5, 1}, {5, 0})) == doctest::Approx(sqrt(5.0) / 26.0).epsilon(1e-12));
}

TEST_CASE("diagonal elements follow C2") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 6.3);
  const LevelSpec lu = make_level(7, 2, -1.77);
  for (int n = 0; n < 10; ++n) {
    const angular::EulerAngles w{U(rng), U(rng)};
    for (HalfInt F : lu.allowed_F())
      for (int m2 = -F.twice(); m2 <= F.twice(); m2 += 2) {
        const HalfInt m = HalfInt::from_twice(m2);
        const auto v = theta_matrix_element(lu, {F, m}, {F, m}, 0, w);
        const auto expect = c2_coefficient(lu, F, m) * lu.theta * angular::wigner_D2(0, 0, w);
        CHECK(std::abs(v - expect) < 1e-12);
      }
  }
}

TEST_CASE("C2 coefficient") {
  const LevelSpec d52 = make_level(0, half(5));
  CHECK(c2_coefficient(d52, half(5), half(5)) == doctest::Approx(1.0).epsilon(1e-14));
  // I = 0: C2 = (3m^2 - J(J+1)) / (3J^2 - J(J+1)).
  for (int m2 = -5; m2 <= 5; m2 += 2) {
    const double m = 0.5 * m2;
    CHECK(c2_coefficient(d52, half(5), HalfInt::from_twice(m2)) ==
          doctest::Approx((3 * m * m - 8.75) / (3 * 6.25 - 8.75)).epsilon(1e-13));
  }
  const LevelSpec lu = make_level(7, 2);
  for (HalfInt F : lu.allowed_F()) {
    double sum = 0.0;
    for (int m2 = -F.twice(); m2 <= F.twice(); m2 += 2) sum += c2_coefficient(lu, F, HalfInt::from_twice(m2));
    CHECK(std::abs(sum) < 1e-12);
  }
  // Oracle value of the I = 7, J = 2, F = m = 5 coefficient.
  const double six = oracle::six_j(10, 10, 4, 4, 4, 14);
  const double three = oracle::three_j(10, 4, 10, 10, 0, -10);
  const double ref = ((10 + 7 + 2 + 5) % 2 == 0 ? 1.0 : -1.0) * 11.0 * six * three / oracle::three_j(4, 4, 4, -4, 0, 4);
  CHECK(c2_coefficient(lu, 5, 5) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(ref == doctest::Approx(15.0 / 26.0).epsilon(1e-12));
}

TEST_CASE("hq_matrix is Hermitian, traceless per manifold and obeys selection rules") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (HalfInt I : {HalfInt(0), HalfInt(7)}) {
    for (HalfInt J : {HalfInt(1), HalfInt(2), half(5)}) {
      const LevelSpec level = make_level(I, J, U(rng));
      for (int n = 0; n < 3; ++n) {
        const TrapConfig trap = unit_trap(U(rng), U(rng), {U(rng), U(rng)});
        const QuadCouplingMatrix hq = hq_matrix(level, trap, level.allowed_F());
        const double scale = hq.amplitude.cwiseAbs().maxCoeff();
        CHECK((hq.amplitude - hq.amplitude.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
        for (HalfInt F : level.allowed_F()) {
          std::complex<double> tr = 0.0;
          for (std::size_t i = 0; i < hq.basis.size(); ++i)
            if (hq.basis[i].F == F) tr += hq.amplitude(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
          CHECK(std::abs(tr) <= 1e-12 * scale);
        }
        for (std::size_t i = 0; i < hq.basis.size(); ++i)
          for (std::size_t j = 0; j < hq.basis.size(); ++j) {
            const int dF = std::abs((hq.basis[i].F - hq.basis[j].F).twice());
            const int dm = std::abs((hq.basis[i].m - hq.basis[j].m).twice());
            if (dF > 4 || dm > 4) CHECK(hq.amplitude(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == 0.0);
          }
      }
    }
  }
}

TEST_CASE("beta = 0 couples only dmu = q, and alpha only rephases") {
  const LevelSpec lu = make_level(7, 2, -1.77);
  const std::vector<HalfInt> manifold{5, 6};
  const QuadCouplingMatrix h0 = hq_matrix(lu, unit_trap(0.0, 1.0, {0.0, 0.0}), manifold);
  const double alpha = 0.37;
  const QuadCouplingMatrix ha = hq_matrix(lu, unit_trap(0.0, 1.0, {alpha, 0.0}), manifold);
  for (std::size_t i = 0; i < h0.basis.size(); ++i)
    for (std::size_t j = 0; j < h0.basis.size(); ++j) {
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
      const int dm = (h0.basis[i].m - h0.basis[j].m).twice() / 2;
      if (std::abs(dm) != 2) CHECK(h0.amplitude(a, b) == 0.0);
      // D_{dm,q} at beta = 0 is exp(i q alpha) for dm = q.
      CHECK(std::abs(ha.amplitude(a, b) - h0.amplitude(a, b) * std::polar(1.0, dm * alpha)) < 1e-12);
    }
}

TEST_CASE("zero field gives a zero matrix") {
  const LevelSpec lu = make_level(7, 2, -1.77);
  CHECK(hq_matrix(lu, unit_trap(0.0, 0.0, {0.4, 0.9}), {5}).amplitude.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("basis ordering and lookup") {
  const LevelSpec lu = make_level(7, 1);
  const QuadCouplingMatrix hq = hq_matrix(lu, unit_trap(0.0, 1.0), {8, 6});
  CHECK(hq.basis.front().F == HalfInt(6));
  CHECK(hq.basis.front().m == HalfInt(-6));
  CHECK(hq.basis.back().F == HalfInt(8));
  CHECK(hq.basis.back().m == HalfInt(8));
  CHECK(std::is_sorted(hq.basis.begin(), hq.basis.end()));
  CHECK_THROWS_AS((void)hq.index_of({7, 0}), InvalidInput);
}

TEST_CASE("invalid inputs") {
  const LevelSpec lu = make_level(7, 2);
  CHECK_THROWS_AS(hq_matrix(lu, unit_trap(0.0, 1.0), {}), InvalidInput);
  CHECK_THROWS_AS(hq_matrix(lu, unit_trap(0.0, 1.0), {10}), InvalidInput);
  CHECK_THROWS_AS(theta_matrix_element(lu, {10, 0}, {5, 0}, 0, {}), InvalidInput);
  CHECK_THROWS_AS(theta_matrix_element(lu, {5, 6}, {5, 0}, 0, {}), InvalidInput);
  CHECK_THROWS_AS(theta_matrix_element(lu, {5, 0}, {5, 0}, 3, {}), InvalidInput);
  LevelSpec s = make_level(0, half(1));
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  LevelSpec dup = make_level(7, 1);
  dup.hyperfine_energies = {{6, 1.0}, {7, 1.0}};
  CHECK_THROWS_AS(dup.validate(), InvalidInput);
  CHECK_THROWS_WITH_AS((void)lu.hyperfine_energy(5), doctest::Contains("hyperfine_F_energies_Hz"), InvalidInput);
}
