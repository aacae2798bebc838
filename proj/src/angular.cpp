#include "quadshift/angular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "quadshift/error.hpp"

namespace quadshift::angular {
namespace {

// Factorials in extended precision; exact up to 25!, correctly rounded
// beyond. Arguments of the Racah sums never exceed ~4j+1 here.
constexpr int kMaxFactorial = 170;

const std::array<long double, kMaxFactorial + 1>& factorials() {
  static const auto table = [] {
    std::array<long double, kMaxFactorial + 1> t{};
    t[0] = 1.0L;
    for (int n = 1; n <= kMaxFactorial; ++n) t[n] = t[n - 1] * n;
    return t;
  }();
  return table;
}

long double fact(int n) {
  if (n < 0 || n > kMaxFactorial) throw InvalidInput("factorial argument out of range: " + std::to_string(n));
  return factorials()[n];
}

// Arguments are doubled integers; the callers guarantee evenness.
int half_of(int twice) { return twice / 2; }

long double sign_of(int n) { return (n % 2 == 0) ? 1.0L : -1.0L; }

// sqrt of the triangle coefficient Delta(abc) in doubled units.
long double triangle_root(int a, int b, int c) {
  const long double num = fact(half_of(a + b - c)) * fact(half_of(a - b + c)) * fact(half_of(-a + b + c));
  return std::sqrt(num / fact(half_of(a + b + c) + 1));
}

void require_momentum(HalfInt j, const char* name) {
  if (j.twice() < 0) throw InvalidInput(std::string("negative angular momentum ") + name + " = " + j.str());
}

void require_projection(HalfInt j, HalfInt m, const char* name) {
  if (!is_projection(j, m))
    throw InvalidInput(std::string("invalid projection ") + name + " = " + m.str() + " for j = " + j.str());
}

}  // namespace

bool triangle(HalfInt a, HalfInt b, HalfInt c) {
  const int ta = a.twice(), tb = b.twice(), tc = c.twice();
  if (ta < 0 || tb < 0 || tc < 0) return false;
  if ((ta + tb + tc) % 2 != 0) return false;
  return tc >= std::abs(ta - tb) && tc <= ta + tb;
}

double wigner_3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
  require_momentum(j1, "j1");
  require_momentum(j2, "j2");
  require_momentum(j3, "j3");
  require_projection(j1, m1, "m1");
  require_projection(j2, m2, "m2");
  require_projection(j3, m3, "m3");

  if ((m1 + m2 + m3).twice() != 0) return 0.0;
  if (!triangle(j1, j2, j3)) return 0.0;

  const int a = j1.twice(), b = j2.twice(), c = j3.twice();
  const int ma = m1.twice(), mb = m2.twice(), mc = m3.twice();

  const long double prefactor =
      triangle_root(a, b, c) * std::sqrt(fact(half_of(a + ma)) * fact(half_of(a - ma)) * fact(half_of(b + mb)) *
                                         fact(half_of(b - mb)) * fact(half_of(c + mc)) * fact(half_of(c - mc)));

  // Racah sum over k with all factorial arguments non-negative.
  const int k1 = half_of(c - b + ma);  // j3 - j2 + m1
  const int k2 = half_of(c - a - mb);  // j3 - j1 - m2
  const int k3 = half_of(a + b - c);   // j1 + j2 - j3
  const int k4 = half_of(a - ma);      // j1 - m1
  const int k5 = half_of(b + mb);      // j2 + m2
  const int kmin = std::max({0, -k1, -k2});
  const int kmax = std::min({k3, k4, k5});

  long double sum = 0.0L;
  for (int k = kmin; k <= kmax; ++k) {
    const long double denom = fact(k) * fact(k1 + k) * fact(k2 + k) * fact(k3 - k) * fact(k4 - k) * fact(k5 - k);
    sum += sign_of(k) / denom;
  }
  const long double phase = sign_of(half_of(a - b - mc));
  return static_cast<double>(phase * prefactor * sum);
}

double wigner_6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
  for (HalfInt j : {j1, j2, j3, j4, j5, j6}) require_momentum(j, "j");
  if (!triangle(j1, j2, j3) || !triangle(j1, j5, j6) || !triangle(j4, j2, j6) || !triangle(j4, j5, j3)) return 0.0;

  const int a = j1.twice(), b = j2.twice(), c = j3.twice();
  const int d = j4.twice(), e = j5.twice(), f = j6.twice();

  const long double prefactor =
      triangle_root(a, b, c) * triangle_root(a, e, f) * triangle_root(d, b, f) * triangle_root(d, e, c);

  const int alpha1 = half_of(a + b + c);
  const int alpha2 = half_of(a + e + f);
  const int alpha3 = half_of(d + b + f);
  const int alpha4 = half_of(d + e + c);
  const int beta1 = half_of(a + b + d + e);
  const int beta2 = half_of(b + c + e + f);
  const int beta3 = half_of(c + a + f + d);
  const int tmin = std::max({alpha1, alpha2, alpha3, alpha4});
  const int tmax = std::min({beta1, beta2, beta3});

  long double sum = 0.0L;
  for (int t = tmin; t <= tmax; ++t) {
    const long double denom = fact(t - alpha1) * fact(t - alpha2) * fact(t - alpha3) * fact(t - alpha4) *
                              fact(beta1 - t) * fact(beta2 - t) * fact(beta3 - t);
    sum += sign_of(t) * fact(t + 1) / denom;
  }
  return static_cast<double>(prefactor * sum);
}

double wigner_d2(int mp, int m, double beta) {
  if (std::abs(mp) > 2 || std::abs(m) > 2)
    throw InvalidInput("rank-2 d-matrix index out of range: (" + std::to_string(mp) + ", " + std::to_string(m) + ")");
  constexpr int j = 2;
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  const long double norm = std::sqrt(fact(j + mp) * fact(j - mp) * fact(j + m) * fact(j - m));
  const int kmin = std::max(0, m - mp);
  const int kmax = std::min(j + m, j - mp);
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const long double denom = fact(j + m - k) * fact(k) * fact(j - k - mp) * fact(k - m + mp);
    const double term = static_cast<double>(sign_of(k - m + mp) * norm / denom);
    sum += term * std::pow(c, 2 * j - 2 * k + m - mp) * std::pow(s, 2 * k - m + mp);
  }
  return sum;
}

std::complex<double> wigner_D2(HalfInt mp, HalfInt m, const EulerAngles& angles) {
  if (!mp.is_integer() || !m.is_integer() || std::abs(mp.twice()) > 4 || std::abs(m.twice()) > 4)
    throw InvalidInput("rank-2 rotation index out of range: (" + mp.str() + ", " + m.str() + ")");
  const int row = mp.twice() / 2;
  const int col = m.twice() / 2;
  const double phase = col * angles.alpha;
  return wigner_d2(row, col, -angles.beta) * std::complex<double>(std::cos(phase), std::sin(phase));
}

}  // namespace quadshift::angular
