#pragma once

#include <complex>

#include "quadshift/half_int.hpp"

namespace quadshift::angular {

/// Euler angles taking the principal-axis frame to the laboratory frame
/// (z-y-z, passive). The third angle is about the field axis and is fixed
/// to zero.
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3). Zero when the triangle rule or
/// m1 + m2 + m3 = 0 fails. Throws InvalidInput for negative j or |m| > j.
double wigner_3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3);

/// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}. Zero when any triad fails the
/// triangle rule.
double wigner_6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6);

/// Reduced rotation matrix element d^(2)_{mp,m}(beta), Edmonds/Wigner sign
/// convention. Projections are integers in [-2, 2].
double wigner_d2(int mp, int m, double beta);

/// Rank-2 rotation matrix element D^(2)_{mp,m}(alpha, beta, 0) in the
/// passive interpretation, D_{mp,m} = exp(i m alpha) d_{mp,m}(-beta). With
/// this choice
///   D_{0,0}          = (3 cos^2 beta - 1) / 2
///   D_{+-1,0}        = +-sqrt(3/2) sin beta cos beta
///   D_{+-2,2}+D_{+-2,-2} = (1 + cos^2 beta) cos 2alpha / 2 +- i cos beta sin 2alpha
/// and at beta = 0 the matrix reduces to diag(exp(i m alpha)).
std::complex<double> wigner_D2(HalfInt mp, HalfInt m, const EulerAngles& angles);

/// Triangle condition |a - b| <= c <= a + b with a + b + c integral.
bool triangle(HalfInt a, HalfInt b, HalfInt c);

}  // namespace quadshift::angular
