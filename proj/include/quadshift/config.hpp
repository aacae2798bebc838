#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "quadshift/coupling.hpp"
#include "quadshift/inference.hpp"
#include "quadshift/trap.hpp"

namespace quadshift::config {

inline constexpr int kSchemaVersion = 1;

/// Parses "5/2", "3" or a JSON number into a HalfInt. Throws ConfigError.
HalfInt parse_half_int(const nlohmann::json& j, const std::string& what);

/// Hyperfine level energies E_F/h (Hz) from the magnetic-dipole and
/// electric-quadrupole constants, with K = F(F+1) - I(I+1) - J(J+1):
///   E_F = A K/2 + B (3K(K+1)/2 - 2 I(I+1) J(J+1)) / (2I(2I-1) 2J(2J-1)).
/// The B term is dropped when I < 1 or J < 1.
std::map<HalfInt, double> hyperfine_energies_from_constants(HalfInt I, HalfInt J, double A_hz, double B_hz);

struct Species {
  std::string name;
  HalfInt nuclear_spin{0};
  double mass_u = 0.0;
  double g_S = 2.0025;  ///< ground-state g-factor used by the noise model
  std::vector<LevelSpec> levels;

  const LevelSpec& level(const std::string& term) const;
};

Species parse_species(const nlohmann::json& j);
Species load_species(const std::filesystem::path& path);

/// The trap block of a run configuration. Frequencies in Hz (cyclic) and
/// angles in degrees at the boundary; the returned TrapConfig is SI/rad.
/// Exactly one of "secular_frequency_Hz" (value/error), "secular_frequencies_Hz"
/// (x, y, z) or explicit "A_V_per_m2"/"epsilon_V_per_m2" must be given.
TrapConfig parse_trap(const nlohmann::json& j);

struct ScanBlock {
  double Delta_over_omegaQ = 0.0;
  double Omega0_over_omegaQ = 0.05;
  double span_over_omegaQ = 2.0;
  int points = 801;
  std::optional<double> tau_s;  ///< default pi / Omega0
};

struct FitBlock {
  inference::ProbeModel model;
  inference::FitOptions options;
  double drift_B = 0.0;  ///< tesla
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::string species_file;  ///< resolved relative to the config file
  std::optional<TrapConfig> trap;
  std::optional<ScanBlock> scan;
  std::optional<FitBlock> fit;
  nlohmann::json raw;
};

RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Reads a JSON document, rethrowing parse errors as ConfigError.
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace quadshift::config
