#include "quadshift/config.hpp"

#include <cmath>
#include <fstream>

#include "quadshift/constants.hpp"
#include "quadshift/error.hpp"

namespace quadshift::config {
namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing required field '" + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) throw ConfigError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return number(j, key, where);
}

int integer_or(const json& j, const char* key, int fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ConfigError(where + ": field '" + key + "' must be an integer");
  return j.at(key).get<int>();
}

bool bool_or(const json& j, const char* key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError(where + ": field '" + key + "' must be true or false");
  return j.at(key).get<bool>();
}

void check_version(const json& j, const std::string& where) {
  const json& v = require(j, "schema_version", where);
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    throw ConfigError(where + ": unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
}

LevelSpec parse_level(const json& j, HalfInt I, std::size_t index) {
  const std::string where = "levels[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ConfigError(where + ": must be an object");
  LevelSpec level;
  const json& term = require(j, "term", where);
  if (!term.is_string()) throw ConfigError(where + ": 'term' must be a string");
  level.term = term.get<std::string>();
  level.nuclear_spin = I;
  level.J = parse_half_int(require(j, "J", where), where + ".J");
  level.theta = number(j, "theta_e_a02", where);
  level.g_J = number_or(j, "g_J", 0.0, where);
  if (j.contains("clock_frequency_Hz")) level.clock_frequency = number(j, "clock_frequency_Hz", where);

  if (j.contains("g_F")) {
    if (!j.at("g_F").is_object()) throw ConfigError(where + ": 'g_F' must map F to g");
    for (const auto& [key, value] : j.at("g_F").items()) {
      if (!value.is_number()) throw ConfigError(where + ": g_F values must be numbers");
      level.g_F[parse_half_int(json(key), where + ".g_F")] = value.get<double>();
    }
  }

  const bool has_energies = j.contains("hyperfine_F_energies_Hz");
  const bool has_constants = j.contains("hyperfine_constants_Hz");
  if (has_energies && has_constants)
    throw ConfigError(where + ": give either hyperfine_F_energies_Hz or hyperfine_constants_Hz, not both");
  if (has_energies) {
    const json& e = j.at("hyperfine_F_energies_Hz");
    if (!e.is_object()) throw ConfigError(where + ": 'hyperfine_F_energies_Hz' must map F to energy");
    for (const auto& [key, value] : e.items()) {
      if (!value.is_number()) throw ConfigError(where + ": hyperfine energies must be numbers");
      level.hyperfine_energies[parse_half_int(json(key), where + ".hyperfine_F_energies_Hz")] = value.get<double>();
    }
  } else if (has_constants) {
    const json& c = j.at("hyperfine_constants_Hz");
    const std::string cw = where + ".hyperfine_constants_Hz";
    level.hyperfine_energies =
        hyperfine_energies_from_constants(I, level.J, number(c, "A", cw), number_or(c, "B", 0.0, cw));
  }

  try {
    level.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return level;
}

}  // namespace

HalfInt parse_half_int(const json& j, const std::string& what) {
  if (j.is_number_integer()) return HalfInt(j.get<int>());
  if (j.is_number()) {
    const double twice = 2.0 * j.get<double>();
    if (twice != std::round(twice)) throw ConfigError(what + ": not a multiple of 1/2");
    return HalfInt::from_twice(static_cast<int>(twice));
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      std::size_t pos = 0;
      const int num = std::stoi(s, &pos);
      if (pos == s.size()) return HalfInt(num);
      if (s.substr(pos) == "/2") return HalfInt::from_twice(num);
    } catch (const std::logic_error&) {
    }
    throw ConfigError(what + ": cannot parse '" + s + "' as an integer or half-integer");
  }
  throw ConfigError(what + ": expected a number or a string such as \"5/2\"");
}

std::map<HalfInt, double> hyperfine_energies_from_constants(HalfInt I, HalfInt J, double A_hz, double B_hz) {
  const double i = I.value(), jj = J.value();
  const bool quad = I.twice() >= 2 && J.twice() >= 2;
  std::map<HalfInt, double> out;
  const int lo = std::abs(I.twice() - J.twice()), hi = I.twice() + J.twice();
  for (int f2 = lo; f2 <= hi; f2 += 2) {
    const double f = 0.5 * f2;
    const double K = f * (f + 1.0) - i * (i + 1.0) - jj * (jj + 1.0);
    double e = 0.5 * A_hz * K;
    if (quad)
      e += B_hz * (1.5 * K * (K + 1.0) - 2.0 * i * (i + 1.0) * jj * (jj + 1.0)) /
           (2.0 * i * (2.0 * i - 1.0) * 2.0 * jj * (2.0 * jj - 1.0));
    out[HalfInt::from_twice(f2)] = e;
  }
  return out;
}

const LevelSpec& Species::level(const std::string& term) const {
  for (const LevelSpec& l : levels)
    if (l.term == term) return l;
  std::string known;
  for (const LevelSpec& l : levels) known += (known.empty() ? "" : ", ") + l.term;
  throw ConfigError("species " + name + " has no level '" + term + "' (available: " + known + ")");
}

Species parse_species(const json& j) {
  const std::string where = "species";
  check_version(j, where);
  Species s;
  const json& name = require(j, "name", where);
  if (!name.is_string()) throw ConfigError("species: 'name' must be a string");
  s.name = name.get<std::string>();
  const json& spin = require(j, "nuclear_spin_twice", where);
  if (!spin.is_number_integer() || spin.get<int>() < 0)
    throw ConfigError("species: 'nuclear_spin_twice' must be a non-negative integer");
  s.nuclear_spin = HalfInt::from_twice(spin.get<int>());
  s.mass_u = number(j, "mass_u", where);
  if (!(s.mass_u > 0.0)) throw ConfigError("species: 'mass_u' must be positive");
  if (j.contains("defaults")) s.g_S = number_or(j.at("defaults"), "g_S", s.g_S, "species.defaults");

  const json& levels = require(j, "levels", where);
  if (!levels.is_array() || levels.empty()) throw ConfigError("species: 'levels' must be a non-empty array");
  for (std::size_t k = 0; k < levels.size(); ++k) s.levels.push_back(parse_level(levels[k], s.nuclear_spin, k));
  return s;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Species load_species(const std::filesystem::path& path) { return parse_species(read_json(path)); }

TrapConfig parse_trap(const json& j) {
  const std::string where = "trap";
  if (!j.is_object()) throw ConfigError("trap: must be an object");
  TrapConfig t;
  t.drive_omega_rf = constants::two_pi * number(j, "drive_frequency_Hz", where);
  t.ion_mass = number(j, "mass_u", where) * constants::atomic_mass_unit;
  t.orientation = {number_or(j, "alpha_deg", 0.0, where) * constants::pi / 180.0,
                   number_or(j, "beta_deg", 0.0, where) * constants::pi / 180.0};

  const int n_secular = static_cast<int>(j.contains("secular_frequency_Hz")) +
                        static_cast<int>(j.contains("secular_frequencies_Hz"));
  const bool explicit_fields = j.contains("A_V_per_m2") || j.contains("epsilon_V_per_m2");
  if (n_secular + static_cast<int>(explicit_fields) != 1)
    throw ConfigError(
        "trap: give exactly one of secular_frequency_Hz, secular_frequencies_Hz or explicit A_V_per_m2/epsilon_V_per_m2");

  Measured ws{};
  if (j.contains("secular_frequency_Hz")) {
    const json& s = j.at("secular_frequency_Hz");
    if (s.is_number()) {
      ws = {constants::two_pi * s.get<double>(), 0.0};
    } else {
      ws = {constants::two_pi * number(s, "value", "trap.secular_frequency_Hz"),
            constants::two_pi * number_or(s, "error", 0.0, "trap.secular_frequency_Hz")};
    }
  } else if (j.contains("secular_frequencies_Hz")) {
    const json& s = j.at("secular_frequencies_Hz");
    const std::string sw = "trap.secular_frequencies_Hz";
    try {
      ws = secular_consistency(constants::two_pi * number(s, "x", sw), constants::two_pi * number(s, "y", sw),
                               constants::two_pi * number(s, "z", sw))
               .omega_s;
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("trap: ") + e.what());
    }
  }

  try {
    if (explicit_fields) {
      t.A = number_or(j, "A_V_per_m2", 0.0, where);
      t.epsilon = number_or(j, "epsilon_V_per_m2", 0.0, where);
      t.validate();
      return t;
    }
    std::string geometry = "linear";
    if (j.contains("geometry")) {
      if (!j.at("geometry").is_string()) throw ConfigError("trap: 'geometry' must be \"linear\" or \"quadrupole\"");
      geometry = j.at("geometry").get<std::string>();
    }
    if (geometry == "linear") {
      t = TrapConfig::ideal_linear(t.ion_mass, t.drive_omega_rf, ws, t.orientation);
    } else if (geometry == "quadrupole") {
      t = TrapConfig::ideal_quadrupole(t.ion_mass, t.drive_omega_rf, ws, t.orientation);
    } else {
      throw ConfigError("trap: 'geometry' must be \"linear\" or \"quadrupole\"");
    }
    t.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("trap: ") + e.what());
  }
  return t;
}

RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir) {
  check_version(j, "config");
  RunConfig c;
  c.raw = j;
  if (j.contains("species_file")) {
    if (!j.at("species_file").is_string()) throw ConfigError("config: 'species_file' must be a string");
    std::filesystem::path p = j.at("species_file").get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    c.species_file = p.string();
  }
  if (j.contains("trap")) c.trap = parse_trap(j.at("trap"));

  if (j.contains("scan")) {
    const json& s = j.at("scan");
    const std::string w = "scan";
    ScanBlock b;
    b.Delta_over_omegaQ = number_or(s, "Delta_over_omegaQ", b.Delta_over_omegaQ, w);
    b.Omega0_over_omegaQ = number_or(s, "Omega0_over_omegaQ", b.Omega0_over_omegaQ, w);
    b.span_over_omegaQ = number_or(s, "span_over_omegaQ", b.span_over_omegaQ, w);
    b.points = integer_or(s, "points", b.points, w);
    if (s.contains("tau_s")) b.tau_s = number(s, "tau_s", w);
    if (!(b.Omega0_over_omegaQ > 0.0) || !(b.span_over_omegaQ > 0.0) || b.points < 2)
      throw ConfigError("scan: Omega0_over_omegaQ and span_over_omegaQ must be positive and points >= 2");
    c.scan = b;
  }

  if (j.contains("fit")) {
    const json& f = j.at("fit");
    const std::string w = "fit";
    FitBlock b;
    b.model.tau = number(f, "tau_s", w);
    b.model.Omega0 = f.contains("Omega0_Hz") ? constants::two_pi * number(f, "Omega0_Hz", w) : constants::pi / b.model.tau;
    b.model.Delta = constants::two_pi * number_or(f, "Delta_Hz", 0.0, w);
    b.model.g_D = number_or(f, "g_D", b.model.g_D, w);
    b.model.g_S = number_or(f, "g_S", b.model.g_S, w);
    b.model.include_k_delta = bool_or(f, "include_k_delta", b.model.include_k_delta, w);
    b.model.quadrature_order = integer_or(f, "quadrature_order", b.model.quadrature_order, w);
    if (f.contains("omega_Q_range_Hz")) {
      const json& r = f.at("omega_Q_range_Hz");
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
        throw ConfigError("fit: 'omega_Q_range_Hz' must be [lo, hi]");
      b.options.omega_Q_lo = constants::two_pi * r[0].get<double>();
      b.options.omega_Q_hi = constants::two_pi * r[1].get<double>();
    }
    b.options.sigma_max = number_or(f, "sigma_max_nT", b.options.sigma_max * 1e9, w) * 1e-9;
    b.options.grid_omega_Q = integer_or(f, "grid_omega_Q", b.options.grid_omega_Q, w);
    b.options.grid_sigma = integer_or(f, "grid_sigma", b.options.grid_sigma, w);
    b.options.max_iterations = integer_or(f, "max_iterations", b.options.max_iterations, w);
    b.options.variance_scale = number_or(f, "variance_scale", b.options.variance_scale, w);
    b.options.scale_errors = bool_or(f, "scale_errors", b.options.scale_errors, w);
    b.drift_B = number_or(f, "drift_nT", 0.0, w) * 1e-9;
    try {
      b.model.validate();
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("fit: ") + e.what());
    }
    c.fit = b;
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_json(path), path.parent_path());
}

}  // namespace quadshift::config
