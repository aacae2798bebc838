// quadshift command-line front end.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "quadshift/config.hpp"
#include "quadshift/constants.hpp"
#include "quadshift/coupling.hpp"
#include "quadshift/dynamics.hpp"
#include "quadshift/effects.hpp"
#include "quadshift/error.hpp"
#include "quadshift/inference.hpp"

namespace {

using namespace quadshift;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Output document: metadata plus one table. CSV prints only the table.
struct Output {
  ojson meta = ojson::object();
  std::vector<std::string> columns;
  std::vector<ojson> rows;
  std::string table_key = "rows";
};

std::string csv_cell(const ojson& v) {
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void emit(const Output& out, const std::string& format, std::ostream& os) {
  if (format == "csv") {
    for (std::size_t c = 0; c < out.columns.size(); ++c) os << (c ? "," : "") << out.columns[c];
    os << '\n';
    for (const ojson& row : out.rows) {
      for (std::size_t c = 0; c < out.columns.size(); ++c) os << (c ? "," : "") << csv_cell(row.at(out.columns[c]));
      os << '\n';
    }
    return;
  }
  ojson doc = out.meta;
  ojson table = ojson::array();
  for (const ojson& row : out.rows) table.push_back(row);
  doc[out.table_key] = table;
  os << doc.dump(2) << '\n';
}

ojson header(const std::string& command) {
  ojson j;
  j["schema_version"] = config::kSchemaVersion;
  j["command"] = command;
  return j;
}

std::vector<HalfInt> parse_manifold(const std::string& text, const LevelSpec& level) {
  if (text == "all") return level.allowed_F();
  std::vector<HalfInt> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(config::parse_half_int(nlohmann::json(item), "--manifold"));
  if (out.empty()) throw ConfigError("--manifold: empty hyperfine manifold");
  return out;
}

// Shared species/level/trap options.
struct LevelArgs {
  std::string species_path;
  std::string level_term;
  std::string config_path;
  double alpha_deg = std::nan("");
  double beta_deg = std::nan("");

  void add(CLI::App* app) {
    app->add_option("--species", species_path, "Species JSON file")->required();
    app->add_option("--level", level_term, "Level term label, e.g. D5/2 or 3D2")->required();
    app->add_option("--config", config_path, "Run configuration JSON with a trap block")->required();
    app->add_option("--alpha-deg", alpha_deg, "Override the trap Euler angle alpha (degrees)");
    app->add_option("--beta-deg", beta_deg, "Override the trap Euler angle beta (degrees)");
  }

  std::pair<LevelSpec, TrapConfig> load() const {
    const config::Species species = config::load_species(species_path);
    const config::RunConfig run = config::load_run_config(config_path);
    if (!run.trap) throw ConfigError(config_path + ": missing trap block");
    TrapConfig trap = *run.trap;
    if (!std::isnan(alpha_deg)) trap.orientation.alpha = alpha_deg * constants::pi / 180.0;
    if (!std::isnan(beta_deg)) trap.orientation.beta = beta_deg * constants::pi / 180.0;
    return {species.level(level_term), trap};
  }
};

Output cmd_matrix_elements(const LevelArgs& args, const std::string& manifold_text) {
  const auto [level, trap] = args.load();
  const QuadCouplingMatrix hq = hq_matrix(level, trap, parse_manifold(manifold_text, level));
  Output out;
  out.meta = header("matrix-elements");
  out.meta["level"] = level.term;
  out.meta["units"] = "rad/s";
  out.meta["dimension"] = hq.basis.size();
  out.table_key = "entries";
  out.columns = {"F_bra", "m_bra", "F_ket", "m_ket", "re", "im", "abs"};
  for (std::size_t i = 0; i < hq.basis.size(); ++i) {
    for (std::size_t j = 0; j < hq.basis.size(); ++j) {
      const auto v = hq.amplitude(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      ojson row;
      row["F_bra"] = hq.basis[i].F.str();
      row["m_bra"] = hq.basis[i].m.str();
      row["F_ket"] = hq.basis[j].F.str();
      row["m_ket"] = hq.basis[j].m.str();
      row["re"] = v.real();
      row["im"] = v.imag();
      row["abs"] = std::abs(v);
      out.rows.push_back(row);
    }
  }
  return out;
}

Output cmd_clock_shift(const LevelArgs& args, const std::string& F_text, int n_alpha, int n_beta) {
  const auto [level, trap] = args.load();
  if (!level.clock_frequency) throw ConfigError(level.term + ": missing clock_frequency_Hz");
  ClockTransition transition{*level.clock_frequency, std::nullopt};
  if (!F_text.empty()) transition.single_F = config::parse_half_int(nlohmann::json(F_text), "--F");

  const ShiftDecomposition d = shift_decomposition(level, transition, trap);
  Output out;
  out.meta = header("clock-shift");
  out.meta["level"] = level.term;
  out.meta["clock_frequency_Hz"] = transition.frequency_hz;
  out.meta["averaging"] = transition.single_F ? "single-F" : "hyperfine-average";
  out.meta["a"] = d.a;
  out.meta["eta"] = d.eta;
  out.meta["a0"] = d.a0;
  out.meta["fractional_shift"] = d.fractional_shift();
  out.meta["static_limit_ok"] = static_limit_valid(level, trap);
  ojson perF = ojson::array();
  for (HalfInt F : level.allowed_F()) {
    const ClockShift s = clock_shift(level, F, trap);
    ojson e;
    e["F"] = F.str();
    e["shift_Hz"] = s.total;
    e["dm0_Hz"] = s.by_abs_dm[0];
    e["dm1_Hz"] = s.by_abs_dm[1];
    e["dm2_Hz"] = s.by_abs_dm[2];
    perF.push_back(e);
  }
  out.meta["per_F"] = perF;

  out.table_key = "grid";
  out.columns = {"alpha_deg", "beta_deg", "fractional_shift"};
  if (n_alpha > 0 && n_beta > 0) {
    for (const OrientationSample& s : orientation_scan(d, n_alpha, n_beta)) {
      ojson row;
      row["alpha_deg"] = s.alpha * 180.0 / constants::pi;
      row["beta_deg"] = s.beta * 180.0 / constants::pi;
      row["fractional_shift"] = s.fractional_shift;
      out.rows.push_back(row);
    }
  } else {
    ojson row;
    row["alpha_deg"] = trap.orientation.alpha * 180.0 / constants::pi;
    row["beta_deg"] = trap.orientation.beta * 180.0 / constants::pi;
    row["fractional_shift"] = d.fractional_shift();
    out.rows.push_back(row);
  }
  return out;
}

Output cmd_effects(const LevelArgs& args, const std::string& F_text, double zeeman_hz) {
  const auto [level, trap] = args.load();
  std::vector<HalfInt> Fs = level.allowed_F();
  if (!F_text.empty()) Fs = {config::parse_half_int(nlohmann::json(F_text), "--F")};
  Output out;
  out.meta = header("effects");
  out.meta["level"] = level.term;
  out.meta["omega_Q_rad_s"] = trap.epsilon * level.theta * constants::quadrupole_unit / constants::hbar;
  out.meta["zeeman_splitting_Hz"] = std::isnan(zeeman_hz) ? ojson(nullptr) : ojson(zeeman_hz);
  out.table_key = "states";
  out.columns = {"F", "m", "c2", "sideband_index", "coupling_dm1_rad_s", "coupling_dm2_rad_s", "zeeman_shift_rad_s"};

  ZeemanConfig zeeman;
  if (!std::isnan(zeeman_hz)) zeeman = ZeemanConfig::from_splitting(1.0, constants::two_pi * zeeman_hz);
  for (HalfInt F : Fs) {
    for (int m2 = -F.twice(); m2 <= F.twice(); m2 += 2) {
      const HalfInt m = HalfInt::from_twice(m2);
      ojson row;
      row["F"] = F.str();
      row["m"] = m.str();
      row["c2"] = c2_coefficient(level, F, m);
      row["sideband_index"] = sideband_index(level, F, m, trap);
      for (int dm : {1, 2}) {
        const std::string key = "coupling_dm" + std::to_string(dm) + "_rad_s";
        if (is_projection(F, m + dm))
          row[key] = std::abs(resonant_coupling(level, {F, m + dm}, {F, m}, trap));
        else
          row[key] = 0.0;
      }
      row["zeeman_shift_rad_s"] =
          std::isnan(zeeman_hz) ? ojson(nullptr) : ojson(offresonant_zeeman_shift(level, F, m, trap, zeeman));
      out.rows.push_back(row);
    }
  }
  return out;
}

struct SpectrumArgs {
  double Delta = 0.0;
  double Omega0_ratio = 0.05;
  double span = 2.0;
  int points = 801;
  double tau = std::nan("");
  double omega_Q_hz = std::nan("");
  double sigma_nT = 0.0;
  double g_D = 1.2;
  double g_S = 2.0025;
  int order = 48;
  double prominence = 0.15;
};

Output cmd_spectrum(const SpectrumArgs& a) {
  if (!(a.Omega0_ratio > 0.0)) throw ConfigError("--Omega0-ratio must be positive");
  if (a.sigma_nT != 0.0 && std::isnan(a.omega_Q_hz))
    throw ConfigError("--sigma-nT needs a physical scale, give --omega-Q-Hz");
  // Dimensionless unless a physical omega_Q is given.
  const double wQ = std::isnan(a.omega_Q_hz) ? 1.0 : constants::two_pi * a.omega_Q_hz;
  const dynamics::RwaSystem sys{wQ, a.Omega0_ratio * wQ, a.Delta * wQ, 0.0};
  const double tau = std::isnan(a.tau) ? constants::pi / sys.Omega0 : a.tau;
  const std::vector<double> grid = dynamics::detuning_grid(a.span * wQ, a.points);

  dynamics::SpectrumScan scan;
  if (a.sigma_nT != 0.0) {
    inference::QuadratureOptions q;
    q.order = a.order;
    scan = inference::noise_averaged_signal(
        sys, inference::NoiseModel::from_g_factors(a.sigma_nT * 1e-9, a.g_D, a.g_S), grid, tau, q);
  } else {
    scan = dynamics::scan_spectrum(sys, grid, tau);
  }

  Output out;
  out.meta = header("spectrum");
  out.meta["Delta_over_omegaQ"] = a.Delta;
  out.meta["Omega0_over_omegaQ"] = a.Omega0_ratio;
  out.meta["tau_omegaQ"] = tau * wQ;
  out.meta["sigma_nT"] = a.sigma_nT;
  ojson lines = ojson::array();
  for (const dynamics::Line& l : dynamics::find_lines(scan, a.prominence)) {
    ojson e;
    e["delta_over_omegaQ"] = l.position / wQ;
    e["height"] = l.height;
    e["prominence"] = l.prominence;
    lines.push_back(e);
  }
  out.meta["lines"] = lines;
  out.table_key = "points";
  out.columns = {"delta_over_omegaQ", "transfer_probability"};
  for (std::size_t i = 0; i < scan.delta.size(); ++i) {
    ojson row;
    row["delta_over_omegaQ"] = scan.delta[i] / wQ;
    row["transfer_probability"] = scan.probability[i];
    out.rows.push_back(row);
  }
  return out;
}

inference::CountsData read_counts_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  inference::CountsData d;
  std::string line;
  bool first = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (first) {
      first = false;
      if (line.rfind("delta_hz", 0) == 0) continue;
    }
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected delta_hz,excited_counts,shots");
    try {
      d.delta.push_back(constants::two_pi * std::stod(a));
      d.counts.push_back(std::stod(b));
      d.shots.push_back(std::stoi(c));
    } catch (const std::logic_error&) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": not a number");
    }
  }
  try {
    d.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return d;
}

ojson fit_json(const inference::FitResult& r) {
  ojson j = header("fit");
  j["omega_Q_Hz"] = r.omega_Q.value / constants::two_pi;
  j["omega_Q_error_Hz"] = r.omega_Q.error / constants::two_pi;
  j["sigma_nT"] = r.sigma_B.value * 1e9;
  j["sigma_error_nT"] = r.sigma_B.error * 1e9;
  j["chi2"] = r.chi2;
  j["chi2_reduced"] = r.chi2_reduced;
  j["n_points"] = r.n_points;
  j["shots_per_point"] = r.shots_per_point;
  j["iterations"] = r.iterations;
  j["errors_scaled"] = r.errors_scaled;
  return j;
}

Output cmd_fit(const std::string& data_path, const std::string& config_path) {
  const config::RunConfig run = config::load_run_config(config_path);
  if (!run.fit) throw ConfigError(config_path + ": missing fit block");
  const inference::FitResult r = inference::fit_spectrum(read_counts_csv(data_path), run.fit->model, run.fit->options);
  Output out;
  out.meta = fit_json(r);
  out.table_key = "parameters";
  out.columns = {"name", "value", "error", "unit"};
  out.rows.push_back({{"name", "omega_Q"}, {"value", r.omega_Q.value / constants::two_pi},
                      {"error", r.omega_Q.error / constants::two_pi}, {"unit", "Hz"}});
  out.rows.push_back(
      {{"name", "sigma_B"}, {"value", r.sigma_B.value * 1e9}, {"error", r.sigma_B.error * 1e9}, {"unit", "nT"}});
  return out;
}

Output cmd_extract_theta(const std::string& config_path, const std::string& fit_path, double wq_hz, double wq_err_hz) {
  const config::RunConfig run = config::load_run_config(config_path);
  if (!run.trap) throw ConfigError(config_path + ": missing trap block");
  Measured wq{constants::two_pi * wq_hz, constants::two_pi * wq_err_hz};
  if (!fit_path.empty()) {
    const nlohmann::json f = config::read_json(fit_path);
    if (!f.contains("omega_Q_Hz") || !f.contains("omega_Q_error_Hz"))
      throw ConfigError(fit_path + ": expected omega_Q_Hz and omega_Q_error_Hz");
    wq = {constants::two_pi * f.at("omega_Q_Hz").get<double>(),
          constants::two_pi * f.at("omega_Q_error_Hz").get<double>()};
  } else if (std::isnan(wq_hz)) {
    throw ConfigError("extract-theta needs --fit or --omega-Q-Hz");
  }
  const inference::ThetaEstimate t = inference::extract_theta(wq, *run.trap);
  Output out;
  out.meta = header("extract-theta");
  out.meta["omega_Q_Hz"] = wq.value / constants::two_pi;
  out.meta["omega_Q_error_Hz"] = wq.error / constants::two_pi;
  out.meta["secular_frequency_Hz"] = run.trap->secular_omega.value / constants::two_pi;
  out.meta["secular_error_Hz"] = run.trap->secular_omega.error / constants::two_pi;
  out.meta["theta_e_a02"] = t.theta.value;
  out.meta["theta_error_e_a02"] = t.theta.error;
  out.meta["rel_error_omega_Q"] = t.rel_error_omega_Q;
  out.meta["rel_error_omega_s"] = t.rel_error_omega_s;
  out.table_key = "result";
  out.columns = {"theta_e_a02", "theta_error_e_a02"};
  out.rows.push_back({{"theta_e_a02", t.theta.value}, {"theta_error_e_a02", t.theta.error}});
  return out;
}

Output cmd_secular(double x, double y, double z) {
  const SecularEstimate s = secular_consistency(constants::two_pi * x, constants::two_pi * y, constants::two_pi * z);
  Output out;
  out.meta = header("secular");
  out.meta["secular_frequency_Hz"] = s.omega_s.value / constants::two_pi;
  out.meta["secular_error_Hz"] = s.omega_s.error / constants::two_pi;
  out.meta["asymmetry_Hz"] = s.asymmetry / constants::two_pi;
  out.table_key = "result";
  out.columns = {"secular_frequency_Hz", "secular_error_Hz"};
  out.rows.push_back({{"secular_frequency_Hz", s.omega_s.value / constants::two_pi},
                      {"secular_error_Hz", s.omega_s.error / constants::two_pi}});
  return out;
}

Output cmd_combine(const std::vector<std::string>& runs, double drift_hz) {
  std::vector<Measured> values;
  for (const std::string& r : runs) {
    const auto comma = r.find(',');
    if (comma == std::string::npos) throw ConfigError("--run expects value,error in Hz, got '" + r + "'");
    try {
      values.push_back({std::stod(r.substr(0, comma)), std::stod(r.substr(comma + 1))});
    } catch (const std::logic_error&) {
      throw ConfigError("--run expects value,error in Hz, got '" + r + "'");
    }
  }
  const Measured c = inference::combine_runs(std::span<const Measured>(values), drift_hz);
  Output out;
  out.meta = header("combine");
  out.meta["omega_Q_Hz"] = c.value;
  out.meta["omega_Q_error_Hz"] = c.error;
  out.table_key = "result";
  out.columns = {"omega_Q_Hz", "omega_Q_error_Hz"};
  out.rows.push_back({{"omega_Q_Hz", c.value}, {"omega_Q_error_Hz", c.error}});
  return out;
}

Output cmd_synthesize(const std::string& config_path, double wq_hz, double sigma_nT, double span_hz, int points,
                      int shots, std::uint64_t seed) {
  const config::RunConfig run = config::load_run_config(config_path);
  if (!run.fit) throw ConfigError(config_path + ": missing fit block");
  const auto grid = dynamics::detuning_grid(constants::two_pi * span_hz, points);
  const inference::CountsData d =
      inference::synthesize(run.fit->model, constants::two_pi * wq_hz, sigma_nT * 1e-9, grid, shots, seed);
  Output out;
  out.meta = header("synthesize");
  out.meta["omega_Q_Hz"] = wq_hz;
  out.meta["sigma_nT"] = sigma_nT;
  out.meta["seed"] = seed;
  out.table_key = "points";
  out.columns = {"delta_hz", "excited_counts", "shots"};
  for (std::size_t i = 0; i < d.delta.size(); ++i)
    out.rows.push_back({{"delta_hz", d.delta[i] / constants::two_pi},
                        {"excited_counts", static_cast<int>(d.counts[i])},
                        {"shots", d.shots[i]}});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oscillating-quadrupole effects on trapped-ion levels"};
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.set_help_all_flag("--help-all");

  Output result;
  std::function<Output()> run;

  LevelArgs me_args;
  std::string manifold = "all";
  auto* me = app.add_subcommand("matrix-elements", "H_Q amplitude matrix over hyperfine manifolds");
  me_args.add(me);
  me->add_option("--manifold", manifold, "Comma-separated F values, or 'all'");
  me->callback([&] { run = [&] { return cmd_matrix_elements(me_args, manifold); }; });

  LevelArgs cs_args;
  std::string cs_F;
  std::vector<int> cs_grid;
  auto* cs = app.add_subcommand("clock-shift", "m = 0 clock shift, (a, eta) and orientation grids");
  cs_args.add(cs);
  cs->add_option("--F", cs_F, "Single hyperfine clock level (default: hyperfine average)");
  cs->add_option("--grid", cs_grid, "Orientation grid size: n_alpha n_beta")->expected(2);
  cs->callback([&] {
    run = [&] {
      return cmd_clock_shift(cs_args, cs_F, cs_grid.empty() ? 0 : cs_grid[0], cs_grid.empty() ? 0 : cs_grid[1]);
    };
  });

  LevelArgs ef_args;
  std::string ef_F;
  double ef_zeeman = std::nan("");
  auto* ef = app.add_subcommand("effects", "Sideband indices, resonant couplings and Zeeman-ladder shifts");
  ef_args.add(ef);
  ef->add_option("--F", ef_F, "Restrict to one hyperfine level");
  ef->add_option("--zeeman-splitting-Hz", ef_zeeman, "Neighbouring-state Zeeman splitting for off-resonant shifts");
  ef->callback([&] { run = [&] { return cmd_effects(ef_args, ef_F, ef_zeeman); }; });

  SpectrumArgs sp_args;
  auto* sp = app.add_subcommand("spectrum", "Autler-Townes transfer spectrum of the four-level model");
  sp->add_option("--Delta", sp_args.Delta, "rf detuning Delta in units of omega_Q");
  sp->add_option("--Omega0-ratio", sp_args.Omega0_ratio, "Omega0 / omega_Q");
  sp->add_option("--span", sp_args.span, "Scan half-width in units of omega_Q");
  sp->add_option("--points", sp_args.points, "Number of detunings")->check(CLI::Range(2, 10'000'000));
  sp->add_option("--tau", sp_args.tau, "Probe time (default pi/Omega0), in 1/omega_Q or s with --omega-Q-Hz");
  sp->add_option("--omega-Q-Hz", sp_args.omega_Q_hz, "Physical omega_Q/2pi (enables --sigma-nT)");
  sp->add_option("--sigma-nT", sp_args.sigma_nT, "rms quasi-static field noise");
  sp->add_option("--g-D", sp_args.g_D, "D-level g-factor");
  sp->add_option("--g-S", sp_args.g_S, "S-level g-factor");
  sp->add_option("--order", sp_args.order, "Gauss-Hermite order for noise averaging");
  sp->add_option("--prominence", sp_args.prominence, "Minimum line prominence as a fraction of the maximum");
  sp->callback([&] { run = [&] { return cmd_spectrum(sp_args); }; });

  std::string fit_data, fit_config;
  auto* fit = app.add_subcommand("fit", "Fit (omega_Q, sigma) to a counts CSV (delta_hz,excited_counts,shots)");
  fit->add_option("--data", fit_data, "Counts CSV")->required();
  fit->add_option("--config", fit_config, "Run configuration JSON with a fit block")->required();
  fit->callback([&] { run = [&] { return cmd_fit(fit_data, fit_config); }; });

  std::string et_config, et_fit;
  double et_wq = std::nan(""), et_err = 0.0;
  auto* et = app.add_subcommand("extract-theta", "Quadrupole moment from omega_Q and the trap");
  et->add_option("--config", et_config, "Run configuration JSON with a trap block")->required();
  et->add_option("--fit", et_fit, "JSON output of the fit subcommand");
  et->add_option("--omega-Q-Hz", et_wq, "omega_Q / 2pi");
  et->add_option("--omega-Q-error-Hz", et_err, "Uncertainty of omega_Q / 2pi");
  et->callback([&] { run = [&] { return cmd_extract_theta(et_config, et_fit, et_wq, et_err); }; });

  std::vector<double> sec_xyz;
  auto* sec = app.add_subcommand("secular", "Pseudo-potential frequency from measured trap frequencies");
  sec->add_option("--frequencies-Hz", sec_xyz, "omega_x omega_y omega_z over 2pi")->expected(3)->required();
  sec->callback([&] { run = [&] { return cmd_secular(sec_xyz[0], sec_xyz[1], sec_xyz[2]); }; });

  std::vector<std::string> cb_runs;
  double cb_drift = 0.0;
  auto* cb = app.add_subcommand("combine", "Combine repeated omega_Q fits");
  cb->add_option("--run", cb_runs, "value,error in Hz (repeatable)")->required();
  cb->add_option("--drift-Hz", cb_drift, "Drift-induced omega_Q error in Hz");
  cb->callback([&] { run = [&] { return cmd_combine(cb_runs, cb_drift); }; });

  std::string sy_config;
  double sy_wq = 1700.0, sy_sigma = 18.0, sy_span = 3400.0;
  int sy_points = 40, sy_shots = 300;
  std::uint64_t sy_seed = 0;
  auto* sy = app.add_subcommand("synthesize", "Binomial counts drawn from the noise-averaged model");
  sy->add_option("--config", sy_config, "Run configuration JSON with a fit block")->required();
  sy->add_option("--omega-Q-Hz", sy_wq, "True omega_Q / 2pi");
  sy->add_option("--sigma-nT", sy_sigma, "True rms field noise");
  sy->add_option("--span-Hz", sy_span, "Scan half-width");
  sy->add_option("--points", sy_points, "Number of detunings");
  sy->add_option("--shots", sy_shots, "Shots per point");
  sy->add_option("--seed", sy_seed, "Random seed");
  sy->callback([&] { run = [&] { return cmd_synthesize(sy_config, sy_wq, sy_sigma, sy_span, sy_points, sy_shots, sy_seed); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    result = run();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  emit(result, format, std::cout);
  return 0;
}
