#include "quadshift/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "quadshift/constants.hpp"
#include "quadshift/error.hpp"

namespace quadshift {
namespace {

using angular::wigner_3j;
using angular::wigner_6j;

double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// (J 2 J; -J 0 J), the normalisation linking the reduced element to Theta(J).
double stretched_3j(HalfInt J) { return wigner_3j(J, 2, J, -J, 0, J); }

void require_state(const LevelSpec& level, const HyperfineState& s) {
  if (!level.allows_F(s.F))
    throw InvalidInput("F = " + s.F.str() + " is not allowed for I = " + level.nuclear_spin.str() +
                       ", J = " + level.J.str());
  if (!is_projection(s.F, s.m)) throw InvalidInput("m = " + s.m.str() + " is not a projection of F = " + s.F.str());
}

}  // namespace

std::vector<HalfInt> LevelSpec::allowed_F() const {
  std::vector<HalfInt> out;
  const int lo = std::abs(nuclear_spin.twice() - J.twice());
  const int hi = nuclear_spin.twice() + J.twice();
  for (int f = lo; f <= hi; f += 2) out.push_back(HalfInt::from_twice(f));
  return out;
}

bool LevelSpec::allows_F(HalfInt F) const { return angular::triangle(nuclear_spin, J, F); }

void LevelSpec::validate() const {
  if (nuclear_spin.twice() < 0) throw InvalidInput(term + ": negative nuclear spin");
  if (J.twice() < 2) throw InvalidInput(term + ": a quadrupole moment requires J >= 1");
  if (!std::isfinite(theta)) throw InvalidInput(term + ": quadrupole moment must be finite");
  std::set<double> seen;
  for (const auto& [F, energy] : hyperfine_energies) {
    if (!allows_F(F)) throw InvalidInput(term + ": hyperfine level F = " + F.str() + " outside |I-J|..I+J");
    if (!std::isfinite(energy)) throw InvalidInput(term + ": hyperfine energy for F = " + F.str() + " is not finite");
    if (!seen.insert(energy).second) throw InvalidInput(term + ": hyperfine energies must be distinct");
  }
}

double LevelSpec::hyperfine_energy(HalfInt F) const {
  const auto it = hyperfine_energies.find(F);
  if (it == hyperfine_energies.end())
    throw InvalidInput(term + ": missing hyperfine_F_energies_Hz entry for F = " + F.str());
  return it->second;
}

GradientComponents gradient_components(double A, double epsilon) {
  GradientComponents g;
  const double two = epsilon * std::sqrt(2.0 / 3.0);
  g.values = {two, 0.0, -2.0 * A, 0.0, two};
  return g;
}

double reduced_theta_element(const LevelSpec& level, const HyperfineState& bra, const HyperfineState& ket) {
  require_state(level, bra);
  require_state(level, ket);
  if (level.J.twice() < 2) throw InvalidInput(level.term + ": a quadrupole moment requires J >= 1");

  const HalfInt dmu = bra.m - ket.m;
  if (std::abs(dmu.twice()) > 4) return 0.0;
  const HalfInt I = level.nuclear_spin;
  const HalfInt J = level.J;

  const double six = wigner_6j(ket.F, bra.F, 2, J, J, I);
  if (six == 0.0) return 0.0;
  const double three = wigner_3j(ket.F, 2, bra.F, ket.m, dmu, -bra.m);
  if (three == 0.0) return 0.0;

  const int phase_twice = bra.F.twice() + ket.F.twice() + I.twice() + J.twice() + bra.m.twice();
  return parity(phase_twice / 2) * std::sqrt((bra.F.twice() + 1.0) * (ket.F.twice() + 1.0)) * six * three /
         stretched_3j(J) * level.theta;
}

std::complex<double> theta_matrix_element(const LevelSpec& level, const HyperfineState& bra,
                                          const HyperfineState& ket, int q, const angular::EulerAngles& angles) {
  if (std::abs(q) > 2) throw InvalidInput("tensor component q must satisfy |q| <= 2");
  const double reduced = reduced_theta_element(level, bra, ket);
  if (reduced == 0.0) return 0.0;
  return reduced * angular::wigner_D2(bra.m - ket.m, q, angles);
}

std::complex<double> hq_element(const LevelSpec& level, const TrapConfig& trap, const HyperfineState& bra,
                                const HyperfineState& ket) {
  const GradientComponents g = gradient_components(trap.A, trap.epsilon);
  std::complex<double> sum = 0.0;
  for (int q = -2; q <= 2; ++q) {
    const std::complex<double> gq = g.at(q);
    if (gq == 0.0) continue;
    sum += gq * theta_matrix_element(level, bra, ket, q, trap.orientation);
  }
  return sum * (constants::quadrupole_unit / constants::hbar);
}

std::size_t QuadCouplingMatrix::index_of(const HyperfineState& s) const {
  const auto it = std::lower_bound(basis.begin(), basis.end(), s);
  if (it == basis.end() || *it != s)
    throw InvalidInput("state |F=" + s.F.str() + ", m=" + s.m.str() + "> is not in the coupling basis");
  return static_cast<std::size_t>(it - basis.begin());
}

QuadCouplingMatrix hq_matrix(const LevelSpec& level, const TrapConfig& trap, const std::vector<HalfInt>& manifold) {
  if (manifold.empty()) throw InvalidInput("hq_matrix: empty hyperfine manifold");
  level.validate();
  trap.validate();

  std::vector<HalfInt> Fs = manifold;
  std::sort(Fs.begin(), Fs.end());
  Fs.erase(std::unique(Fs.begin(), Fs.end()), Fs.end());

  QuadCouplingMatrix out;
  for (HalfInt F : Fs) {
    if (!level.allows_F(F)) throw InvalidInput("hq_matrix: F = " + F.str() + " not allowed for " + level.term);
    for (int m = -F.twice(); m <= F.twice(); m += 2) out.basis.push_back({F, HalfInt::from_twice(m)});
  }

  const auto n = static_cast<Eigen::Index>(out.basis.size());
  out.amplitude = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.amplitude(i, j) = hq_element(level, trap, out.basis[static_cast<std::size_t>(i)],
                                       out.basis[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

double c2_coefficient(const LevelSpec& level, HalfInt F, HalfInt m) {
  require_state(level, {F, m});
  if (level.J.twice() < 2) throw InvalidInput(level.term + ": a quadrupole moment requires J >= 1");
  const HalfInt I = level.nuclear_spin;
  const HalfInt J = level.J;
  const int phase_twice = 2 * F.twice() + I.twice() + J.twice() + m.twice();
  return parity(phase_twice / 2) * (F.twice() + 1.0) * wigner_6j(F, F, 2, J, J, I) * wigner_3j(F, 2, F, m, 0, -m) /
         stretched_3j(J);
}

}  // namespace quadshift
