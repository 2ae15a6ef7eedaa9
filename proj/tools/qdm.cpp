// qdm: command-line driver for the photocell simulator.
//
//   qdm <subcommand> [--config FILE] [--key=value ...]
//
// Exit codes: 0 success, 1 acceptance failure (verify), 2 config error,
// 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qdm/acceptance.hpp"
#include "qdm/qdm.hpp"

namespace {

using namespace qdm;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Output {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit Output(const std::string& path) {
    if (path == "-") return;
    file.open(path);
    if (!file) throw ConfigError("cannot open output file '" + path + "'");
    stream = &file;
  }
};

void write_preamble(CsvWriter& csv, const std::string& sub, const RunConfig& cfg) {
  csv.comment("qdm " + sub);
  for (const auto& line : describe(cfg)) csv.comment(line);
}

CsvCell opt_cell(const std::optional<double>& v) {
  return v ? CsvCell{*v} : CsvCell{std::string()};
}

int run_iv_curve(const RunConfig& cfg, CsvWriter& csv) {
  const IVCurve c = iv_curve(cfg.resolved_params(), cfg.kind, cfg.gamma_grid, cfg.alignment);
  csv.comment("points = " + std::to_string(c.points.size()) +
              ", dropped (voltage undefined) = " + std::to_string(c.undefined_voltage.size()));
  for (const auto& [g, j] : c.undefined_voltage) {
    csv.comment("dropped Gamma=" + CsvWriter::render(g) + " j=" + CsvWriter::render(j));
  }
  csv.header({"Gamma_over_gamma", "j_over_egamma", "V_mV", "P_over_gamma_meV", "coh13", "coh24"});
  for (const auto& pt : c.points) csv.row({pt.Gamma, pt.j, pt.V, pt.P, pt.coh13, pt.coh24});
  return kExitOk;
}

int run_max_power(const RunConfig& cfg, CsvWriter& csv) {
  const ModelParams p = cfg.resolved_params();
  const IVCurve c = iv_curve(p, cfg.kind, cfg.gamma_grid, cfg.alignment);
  const MaxPowerPoint m = max_power_point(c);
  const OpenCircuitVoltage voc = open_circuit_voltage(p, cfg.kind);
  const ShortCircuitCurrent jsc = short_circuit_current(c);
  std::optional<double> dj, dpm;
  if (cfg.kind == ModelKind::qdm) {
    const MaxPowerPoint s = max_power_point(p, ModelKind::sqd, cfg.gamma_grid);
    dj = (m.j_mpp - s.j_mpp) / s.j_mpp;
    dpm = (m.P_m - s.P_m) / s.P_m;
  }
  csv.header({"model", "alignment", "d_nm", "Gamma_star_over_gamma", "j_mpp_over_egamma",
              "V_mpp_mV", "P_m_over_gamma_meV", "eta", "Voc_mV", "Voc_extrapolated",
              "jsc_over_egamma", "jsc_lower_bound", "delta_j", "delta_Pm"});
  csv.row({std::string(to_string(cfg.kind)), std::string(to_string(cfg.alignment)), cfg.d,
           m.Gamma_star, m.j_mpp, m.V_mpp, m.P_m, m.eta, voc.Voc,
           static_cast<long long>(voc.extrapolated), jsc.jsc,
           static_cast<long long>(jsc.lower_bound), opt_cell(dj), opt_cell(dpm)});
  return kExitOk;
}

int run_gamma_grid(const RunConfig& cfg, CsvWriter& csv) {
  const GammaGridScan s =
      gamma_grid_scan(cfg.resolved_params(), cfg.gamma_c_grid, cfg.gamma_v_grid, cfg.gamma_grid, cfg.d);
  csv.comment("cells = " + std::to_string(s.cells.size()) +
              ", failed = " + std::to_string(s.failures()));
  for (const auto& c : s.cells) {
    if (!c.ok()) {
      csv.comment("failed cell gamma_c=" + CsvWriter::render(c.gamma_c) +
                  " gamma_v=" + CsvWriter::render(c.gamma_v) + ": " + c.error);
    }
  }
  for (const auto& [gc, gv] : s.zero_contour) {
    csv.comment("delta_j=0 contour gamma_c=" + CsvWriter::render(gc) +
                " gamma_v=" + CsvWriter::render(gv));
  }
  csv.header({"gamma_c_over_gamma", "gamma_v_over_gamma", "delta_j", "delta_Pm",
              "jsc_over_egamma", "j_mpp_over_egamma", "P_m_over_gamma_meV", "eta", "max_coh13",
              "max_coh24"});
  for (const auto& c : s.cells) {
    if (!c.ok()) continue;
    csv.row({c.gamma_c, c.gamma_v, opt_cell(c.delta_j), opt_cell(c.delta_Pm), c.jsc, c.j_mpp,
             c.P_m, c.eta, c.max_coh13, c.max_coh24});
  }
  return kExitOk;
}

void scenario_header(CsvWriter& csv) {
  csv.header({"alignment", "d_nm", "delta_e_meV", "delta_h_meV", "Te_meV", "Th_meV",
              "jsc_over_egamma", "Voc_mV", "Gamma_star_over_gamma", "j_mpp_over_egamma",
              "V_mpp_mV", "P_m_over_gamma_meV", "eta", "max_coh13", "max_coh24"});
}

void scenario_row(CsvWriter& csv, const ModelParams& base, const ScenarioResult& r) {
  const ModelParams q = with_distance(apply_band_alignment(base, r.alignment), r.d);
  csv.row({std::string(to_string(r.alignment)), r.d, q.delta_e, q.delta_h, q.Te, q.Th, r.jsc,
           r.Voc, r.Gamma_star, r.j_mpp, r.V_mpp, r.P_m, r.eta, r.max_coh13, r.max_coh24});
}

int run_efficiency_vs_d(const RunConfig& cfg, CsvWriter& csv) {
  const auto rows = efficiency_vs_distance(cfg.params, cfg.distances, cfg.alignments, cfg.gamma_grid);
  scenario_header(csv);
  for (const auto& r : rows) scenario_row(csv, cfg.params, r);
  return kExitOk;
}

int run_alignments(const RunConfig& cfg, CsvWriter& csv) {
  const auto rows = efficiency_vs_distance(cfg.params, {cfg.d}, cfg.alignments, cfg.gamma_grid);
  scenario_header(csv);
  for (const auto& r : rows) scenario_row(csv, cfg.params, r);
  return kExitOk;
}

int run_phonon_assisted(const RunConfig& cfg, CsvWriter& csv) {
  const auto rows = phonon_assisted_comparison(cfg.params, cfg.phonon_rates, default_rate_sets(),
                                               cfg.phonon_distances, cfg.gamma_grid);
  csv.header({"rate_set", "gamma_c_over_gamma", "gamma_v_over_gamma", "d_nm",
              "gamma_13_24_over_gamma", "P_m_over_gamma_meV", "P_m_baseline_over_gamma_meV",
              "gain"});
  for (const auto& r : rows) {
    csv.row({r.rate_set, r.gamma_c, r.gamma_v, r.d, r.rate, r.P_m, r.P_m_baseline, r.gain});
  }
  return kExitOk;
}

int run_calibrate(const RunConfig& cfg, CsvWriter& csv) {
  const CalibrationRange range{cfg.hbar_gamma_min, cfg.hbar_gamma_max, cfg.hbar_gamma_points};
  const CalibrationReport r = calibrate_hbar_gamma(cfg.resolved_params(), range, cfg.gamma_grid);
  const CalibrationTargets t;
  csv.comment("targets: Voc_sqd=" + CsvWriter::render(t.Voc_sqd) +
              " jsc_sqd=" + CsvWriter::render(t.jsc_sqd) + " Pm_sqd=" + CsvWriter::render(t.Pm_sqd) +
              " jsc_qdm=" + CsvWriter::render(t.jsc_qdm) + " Pm_qdm=" + CsvWriter::render(t.Pm_qdm));
  csv.header({"hbar_gamma_meV", "Voc_sqd_mV", "jsc_sqd_over_egamma", "Pm_sqd_over_gamma_meV",
              "jsc_qdm_over_egamma", "Pm_qdm_over_gamma_meV", "objective"});
  csv.row({r.hbar_gamma, r.Voc_sqd, r.jsc_sqd, r.Pm_sqd, r.jsc_qdm, r.Pm_qdm, r.objective});
  if (cfg.output != "-") {
    std::cout << "hbar_gamma = " << r.hbar_gamma << " meV\n"
              << "SQD: Voc = " << r.Voc_sqd << " mV, jsc = " << r.jsc_sqd
              << " e*gamma, Pm = " << r.Pm_sqd << " gamma*meV\n"
              << "QDM: jsc = " << r.jsc_qdm << " e*gamma, Pm = " << r.Pm_qdm << " gamma*meV\n";
  }
  return kExitOk;
}

int run_verify(const RunConfig& cfg) {
  acceptance::Options opt;
  opt.seed = cfg.seed;
  opt.random_sets = cfg.random_sets;
  bool all = true;
  for (const auto& c : acceptance::run_all(opt)) {
    std::cout << acceptance::format_line(c) << std::endl;
    all = all && c.pass;
  }
  return all ? kExitOk : kExitVerifyFailed;
}

struct Subcommand {
  std::string name;
  std::string help;
  std::function<int(const RunConfig&, CsvWriter&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Subcommand> subs{
      {"iv-curve", "IV characteristic over the load-rate grid", run_iv_curve},
      {"max-power", "maximum-power point, Voc, jsc and gains versus the single dot", run_max_power},
      {"gamma-grid", "relative current gain over the (gamma_c, gamma_v) grid", run_gamma_grid},
      {"efficiency-vs-d", "efficiency versus barrier width for each band alignment",
       run_efficiency_vs_d},
      {"phonon-assisted", "max-power gain from phonon-assisted tunneling", run_phonon_assisted},
      {"alignments", "all band alignments at the configured barrier width", run_alignments},
      {"calibrate", "fit hbar*gamma to the single-dot and molecule reference values",
       run_calibrate},
      {"verify", "run the built-in acceptance suite", nullptr},
  };

  CLI::App app{"Quantum-dot-molecule photocell simulator. Parameters are set with "
               "--config FILE and --key=value overrides; see --list-keys."};
  std::string config_path;
  bool list_keys = false;
  app.add_option("--config", config_path, "flat key = value file");
  app.add_flag("--list-keys", list_keys, "print every config key with its default and unit");
  app.require_subcommand(0, 1);
  // --key=value overrides after the subcommand fall through to here.
  app.allow_extras();

  std::map<std::string, CLI::App*> handles;
  for (const auto& s : subs) {
    CLI::App* sc = app.add_subcommand(s.name, s.help);
    sc->allow_extras();
    sc->fallthrough();
    handles[s.name] = sc;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (list_keys) {
    for (const auto& line : describe(RunConfig{})) std::cout << line << '\n';
    return kExitOk;
  }

  const Subcommand* chosen = nullptr;
  for (const auto& s : subs) {
    if (handles[s.name]->parsed()) chosen = &s;
  }
  if (!chosen) {
    std::cerr << app.help();
    return kExitConfig;
  }

  RunConfig cfg;
  try {
    if (chosen->name == "calibrate") cfg.params = calibration_params();
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    for (const auto& extra : app.remaining(true)) apply_override(cfg, extra);
    validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (!chosen->run) return run_verify(cfg);
    Output out(cfg.output);
    CsvWriter csv(*out.stream);
    write_preamble(csv, chosen->name, cfg);
    return chosen->run(cfg, csv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qdm::Error& e) {
    std::cerr << "numerical failure in " << chosen->name << ": " << e.what() << '\n';
    return kExitNumerical;
  }
}
