// Command-line front end: closed-form evaluation, Monte Carlo simulation,
// analytic-vs-MC validation, parameter sweeps, and figure presets, emitting
// CSV + plot scripts + a reproducibility manifest per run.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unoma/unoma.hpp"

namespace {

constexpr int kExitValidationFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  std::vector<std::string> mode_names;

  // config overrides; only applied when the flag was given
  int users = 0, k = 0, rank_m = 0, rank_n = 0;
  double a_m = 0, a_n = 0, rate_m = 0, rate_n = 0;
  double ri_db = 0, alpha = 0, eta = 0, radius = 0;
  std::string pairing;

  CLI::App* cmd = nullptr;

  void attach(CLI::App* app) {
    cmd = app;
    app->add_option("--config", config_path, "JSON config file");
    app->add_option("--out", out_dir, "output directory");
    app->add_option("--seed", seed, "RNG seed");
    app->add_option("--mode", mode_names,
                    "evaluation mode, e.g. m, n:psic:exf, pair:ipsic:alf (repeatable)");
    app->add_option("--users", users, "number of users M");
    app->add_option("--k", k, "number of subcarriers K (1 = power-domain)");
    app->add_option("--rank-m", rank_m, "order index of the weaker paired user");
    app->add_option("--rank-n", rank_n, "order index of the stronger paired user");
    app->add_option("--a-m", a_m, "power allocation coefficient of the m-th user");
    app->add_option("--a-n", a_n, "power allocation coefficient of the n-th user");
    app->add_option("--rate-m", rate_m, "target rate of the m-th user [BPCU]");
    app->add_option("--rate-n", rate_n, "target rate of the n-th user [BPCU]");
    app->add_option("--ri-db", ri_db, "total residual-interference power [dB]");
    app->add_option("--alpha", alpha, "path loss exponent");
    app->add_option("--eta", eta, "frequency dependent factor");
    app->add_option("--radius", radius, "user-zone disk radius [m]");
    app->add_option("--throughput-pairing", pairing,
                    "throughput rate pairing: as_printed or conventional");
  }

  unoma::SystemConfig resolve() const {
    unoma::SystemConfig cfg;  // documented defaults
    if (!config_path.empty()) cfg = unoma::load_config_file(config_path, cfg);
    auto set = [&](const char* flag, auto& field, auto value) {
      if (cmd->count(flag)) field = value;
    };
    set("--users", cfg.num_users, users);
    set("--k", cfg.num_subcarriers, k);
    set("--rank-m", cfg.rank_m, rank_m);
    set("--rank-n", cfg.rank_n, rank_n);
    set("--a-m", cfg.a_m, a_m);
    set("--a-n", cfg.a_n, a_n);
    set("--rate-m", cfg.rate_m, rate_m);
    set("--rate-n", cfg.rate_n, rate_n);
    set("--ri-db", cfg.ri_power_total, unoma::db_to_linear(ri_db));
    set("--alpha", cfg.path_loss_exp, alpha);
    set("--eta", cfg.eta, eta);
    set("--radius", cfg.disk_radius, radius);
    if (cmd->count("--throughput-pairing")) {
      if (pairing == "as_printed")
        cfg.throughput_pairing = unoma::ThroughputPairing::as_printed;
      else if (pairing == "conventional")
        cfg.throughput_pairing = unoma::ThroughputPairing::conventional;
      else
        throw std::invalid_argument("unknown --throughput-pairing: " + pairing);
    }
    return unoma::validated(cfg);
  }

  std::vector<unoma::EvalMode> resolve_modes() const {
    if (mode_names.empty()) return unoma::all_eval_modes();
    std::vector<unoma::EvalMode> modes;
    for (const auto& name : mode_names) {
      auto mode = unoma::parse_eval_mode(name);
      if (!mode) throw std::invalid_argument("unknown --mode: " + name);
      modes.push_back(*mode);
    }
    return modes;
  }
};

/// "a" or "a:b:s" -> inclusive grid.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(':', pos);
    std::string tok = text.substr(pos, next == std::string::npos ? next : next - pos);
    parts.push_back(std::stod(tok));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw std::invalid_argument("grid syntax is start:stop:step with step > 0");
  std::vector<double> grid;
  for (int i = 0; parts[0] + i * parts[2] <= parts[1] + 1e-9; ++i)
    grid.push_back(parts[0] + i * parts[2]);
  return grid;
}

void write_outputs(unoma::RunManifest& manifest, const std::string& stem,
                   const unoma::SweepResult& result) {
  namespace fs = std::filesystem;
  std::string csv = unoma::to_csv(result);
  std::string plot = unoma::to_plot_script(result, stem + ".csv");
  unoma::write_file((fs::path(manifest.out_dir) / (stem + ".csv")).string(), csv);
  unoma::write_file((fs::path(manifest.out_dir) / (stem + ".plot")).string(), plot);
  manifest.add_file(stem + ".csv", csv);
  manifest.add_file(stem + ".plot", plot);
}

void finish(unoma::RunManifest& manifest) {
  namespace fs = std::filesystem;
  unoma::write_file((fs::path(manifest.out_dir) / "manifest.json").string(),
                    manifest.to_json().dump(2) + "\n");
}

int run(int argc, char** argv) {
  auto stamp = [&](unoma::RunManifest& m) { m.stamp(argc, argv); };
  CLI::App app{"unified NOMA outage toolkit"};
  app.require_subcommand(1);

  CommonArgs analytic_args, simulate_args, validate_args, sweep_args, figure_args;
  std::string snr_spec = "0:40:5";
  std::string sim_snr_spec = "0:40:5";
  std::string val_snr_spec = "0:40:5";
  std::uint64_t sim_trials = 100000;
  std::uint64_t val_trials = 1000000;
  double rel_tol = 0.05;
  std::string sweep_axis = "snr_db";
  std::string sweep_grid_spec = "0:40:5";
  double sweep_at_snr = 30.0;
  std::uint64_t sweep_trials = 0;
  int figure_number = 0;
  std::uint64_t figure_trials = 0;

  auto* analytic = app.add_subcommand("analytic", "closed-form COP over an SNR grid");
  analytic_args.attach(analytic);
  analytic->add_option("--snr-db", snr_spec, "SNR grid, dB, start:stop:step");

  auto* simulate = app.add_subcommand("simulate", "analytic sweep plus Monte Carlo columns");
  simulate_args.attach(simulate);
  simulate->add_option("--snr-db", sim_snr_spec, "SNR grid, dB, start:stop:step");
  simulate->add_option("--trials", sim_trials, "Monte Carlo trials per grid point");

  auto* validate = app.add_subcommand("validate", "analytic vs Monte Carlo cross-check");
  validate_args.attach(validate);
  validate->add_option("--snr-db", val_snr_spec, "SNR grid, dB, start:stop:step");
  validate->add_option("--trials", val_trials, "Monte Carlo trials per grid point (>= 1e4)");
  validate->add_option("--rel-tol", rel_tol, "relative tolerance for checked points");

  auto* sweep = app.add_subcommand("sweep", "sweep over snr_db, theta, or rate");
  sweep_args.attach(sweep);
  sweep->add_option("--axis", sweep_axis, "snr_db | theta | rate");
  sweep->add_option("--grid", sweep_grid_spec, "axis grid, start:stop:step");
  sweep->add_option("--at-snr-db", sweep_at_snr, "evaluation SNR for theta/rate sweeps");
  sweep->add_option("--trials", sweep_trials, "Monte Carlo trials (0 = analytic only)");

  auto* figure = app.add_subcommand("figure", "run a figure reproduction preset");
  figure_args.attach(figure);
  figure->add_option("number", figure_number, "figure number, 2..9");
  figure->add_option("--figure", figure_number, "figure number, 2..9");
  figure->add_option("--trials", figure_trials, "Monte Carlo trials (0 = preset default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  auto out_dir_ready = [](const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw unoma::IoError("cannot create output directory: " + dir);
  };

  if (analytic->parsed()) {
    auto cfg = analytic_args.resolve();
    unoma::SweepSpec spec{unoma::SweepAxis::snr_db, parse_grid(snr_spec),
                          analytic_args.resolve_modes(), 0, analytic_args.seed};
    out_dir_ready(analytic_args.out_dir);
    unoma::RunManifest manifest{"analytic", analytic_args.config_path, cfg,
                                analytic_args.out_dir, analytic_args.seed, 0};
    stamp(manifest);
    write_outputs(manifest, "analytic", unoma::run_sweep(cfg, spec));
    finish(manifest);
    return 0;
  }
  if (simulate->parsed()) {
    auto cfg = simulate_args.resolve();
    unoma::SweepSpec spec{unoma::SweepAxis::snr_db, parse_grid(sim_snr_spec),
                          simulate_args.resolve_modes(), sim_trials, simulate_args.seed};
    out_dir_ready(simulate_args.out_dir);
    unoma::RunManifest manifest{"simulate", simulate_args.config_path, cfg,
                                simulate_args.out_dir, simulate_args.seed, sim_trials};
    stamp(manifest);
    write_outputs(manifest, "simulate", unoma::run_sweep(cfg, spec));
    finish(manifest);
    return 0;
  }
  if (validate->parsed()) {
    auto cfg = validate_args.resolve();
    auto report = unoma::validate_against_mc(cfg, validate_args.resolve_modes(),
                                             parse_grid(val_snr_spec), val_trials,
                                             validate_args.seed, rel_tol);
    out_dir_ready(validate_args.out_dir);
    unoma::RunManifest manifest{"validate", validate_args.config_path, cfg,
                                validate_args.out_dir, validate_args.seed, val_trials};
    stamp(manifest);
    std::string csv = unoma::to_csv(report);
    unoma::write_file(
        (std::filesystem::path(validate_args.out_dir) / "validate.csv").string(), csv);
    manifest.add_file("validate.csv", csv);
    finish(manifest);
    int checked = 0;
    for (const auto& row : report.rows) checked += row.checked;
    std::cout << (report.aggregate_pass ? "PASS" : "FAIL") << ": " << checked
              << " gated points of " << report.rows.size() << " total\n";
    return report.aggregate_pass ? 0 : kExitValidationFailed;
  }
  if (sweep->parsed()) {
    auto cfg = sweep_args.resolve();
    unoma::SweepSpec spec;
    if (sweep_axis == "snr_db") spec.axis = unoma::SweepAxis::snr_db;
    else if (sweep_axis == "theta") spec.axis = unoma::SweepAxis::theta;
    else if (sweep_axis == "rate") spec.axis = unoma::SweepAxis::rate;
    else throw std::invalid_argument("unknown --axis: " + sweep_axis);
    spec.grid = parse_grid(sweep_grid_spec);
    spec.modes = sweep_args.resolve_modes();
    spec.trials = sweep_trials;
    spec.seed = sweep_args.seed;
    spec.fixed_snr_db = sweep_at_snr;
    out_dir_ready(sweep_args.out_dir);
    unoma::RunManifest manifest{"sweep", sweep_args.config_path, cfg, sweep_args.out_dir,
                                sweep_args.seed, sweep_trials};
    stamp(manifest);
    write_outputs(manifest, "sweep", unoma::run_sweep(cfg, spec));
    finish(manifest);
    return 0;
  }
  if (figure->parsed()) {
    if (figure_number < 2 || figure_number > 9)
      throw std::invalid_argument("figure number must be in 2..9");
    auto sweeps = unoma::figure_preset(figure_number, figure_trials, figure_args.seed);
    out_dir_ready(figure_args.out_dir);
    unoma::RunManifest manifest{"figure " + std::to_string(figure_number),
                                figure_args.config_path, sweeps.front().config,
                                figure_args.out_dir, figure_args.seed, figure_trials};
    stamp(manifest);
    for (const auto& labeled : sweeps) {
      auto result = labeled.throughput
                        ? unoma::run_throughput_sweep(labeled.config, labeled.spec)
                        : unoma::run_sweep(labeled.config, labeled.spec);
      write_outputs(manifest, labeled.label, result);
    }
    finish(manifest);
    return 0;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const unoma::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
