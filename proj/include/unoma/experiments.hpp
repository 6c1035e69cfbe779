#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "unoma/config.hpp"
#include "unoma/montecarlo.hpp"
#include "unoma/outage.hpp"

namespace unoma {

enum class SweepAxis { snr_db, theta, rate };

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::snr_db: return "snr_db";
    case SweepAxis::theta: return "theta";
    case SweepAxis::rate: return "rate";
  }
  return "?";
}

/// One sweep request. For theta/rate axes the grid overrides the power split
/// (a_n, a_m) = (theta, 1-theta) or both target rates per point, evaluated at
/// `fixed_snr_db`. trials == 0 keeps the sweep analytic-only.
struct SweepSpec {
  SweepAxis axis = SweepAxis::snr_db;
  std::vector<double> grid;
  std::vector<EvalMode> modes = all_eval_modes();
  std::uint64_t trials = 0;
  std::uint64_t seed = 1;
  double fixed_snr_db = 30.0;
};

struct CopPoint {
  double axis = 0.0;
  EvalMode mode;
  double exact = 1.0;
  std::optional<double> asymptotic;
  bool feasible = false;
  bool clamped = false;
  std::optional<double> mc_estimate;
  std::optional<double> mc_stderr;
};

struct SweepResult {
  SweepSpec spec;
  SystemConfig config;
  std::vector<CopPoint> rows;  // grid-major, one row per (point, mode)
};

inline void check_sweep_spec(const SweepSpec& spec) {
  if (spec.grid.empty()) throw std::invalid_argument("sweep grid is empty");
  for (std::size_t i = 1; i < spec.grid.size(); ++i)
    if (!(spec.grid[i] > spec.grid[i - 1]))
      throw std::invalid_argument("sweep grid must be strictly increasing");
  if (spec.axis == SweepAxis::theta)
    for (double v : spec.grid)
      if (v < 0.0 || v > 1.0)
        throw std::invalid_argument("theta grid must lie in [0,1]");
  if (spec.modes.empty()) throw std::invalid_argument("sweep needs at least one mode");
}

inline SweepResult run_sweep(const SystemConfig& cfg, const SweepSpec& spec) {
  check_sweep_spec(spec);
  validated(cfg);
  SweepResult result{spec, cfg, {}};
  result.rows.reserve(spec.grid.size() * spec.modes.size());
  for (double value : spec.grid) {
    SystemConfig point = cfg;
    double rho = db_to_linear(spec.fixed_snr_db);
    if (spec.axis == SweepAxis::snr_db) {
      rho = db_to_linear(value);
    } else if (spec.axis == SweepAxis::theta) {
      point.a_n = value;
      point.a_m = 1.0 - value;
    } else {
      point.rate_m = point.rate_n = value;
    }
    if (validate(point)) {
      // Per-point override produced an invalid split: emit flagged rows.
      for (EvalMode mode : spec.modes) {
        CopPoint row;
        row.axis = value;
        row.mode = mode;
        result.rows.push_back(row);  // exact = 1, feasible = false
      }
      continue;
    }
    OutageModel model(point);
    std::optional<McCounts> counts;
    if (spec.trials > 0)
      counts = estimate_counts(point, rho, {spec.trials, spec.seed});
    for (EvalMode mode : spec.modes) {
      CopValue v = model.cop(rho, mode);
      CopPoint row;
      row.axis = value;
      row.mode = mode;
      row.exact = v.exact;
      row.asymptotic = v.asymptotic;
      row.feasible = v.feasible;
      row.clamped = v.clamped;
      if (counts) {
        double p = counts->p(mc_mode_index(mode));
        row.mc_estimate = p;
        row.mc_stderr = std::sqrt(p * (1.0 - p) / double(spec.trials));
      }
      result.rows.push_back(row);
    }
  }
  return result;
}

struct DiversityReport {
  double slope = 0.0;
  int expected_order = 0;
  std::pair<double, double> fit_window_db{0.0, 0.0};
};

/// Least-squares slope of -log10 P against log10 rho over the window.
/// Zero/underflowed points are excluded; the complementary-series CDF keeps
/// full relative precision down to the underflow edge, so any positive value
/// is usable.
inline double fit_diversity_slope(const std::vector<std::pair<double, double>>& curve,
                                  std::pair<double, double> window_db) {
  double lo = db_to_linear(window_db.first), hi = db_to_linear(window_db.second);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (auto [rho, p] : curve) {
    if (rho < lo || rho > hi || !(p > 0.0) || !std::isfinite(p)) continue;
    double x = std::log10(rho), y = -std::log10(p);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) throw std::invalid_argument("diversity fit needs >= 3 points in window");
  double denom = n * sxx - sx * sx;
  if (!(denom > 1e-12 * n * sxx))
    throw std::invalid_argument("diversity fit window is degenerate");
  return (n * sxy - sx * sy) / denom;
}

/// Diversity order the analysis predicts for a mode (the table of slopes:
/// m-th user mK, n-th user with pSIC nK, zero under ipSIC with RI present;
/// the pair inherits the weaker user's order).
inline int expected_diversity_order(const SystemConfig& cfg, EvalMode mode) {
  int K = cfg.num_subcarriers;
  bool floored = mode.sic == Sic::imperfect && cfg.ri_power_total > 0.0;
  switch (mode.target) {
    case Target::user_m: return cfg.rank_m * K;
    case Target::user_n: return floored ? 0 : cfg.rank_n * K;
    case Target::pair: return floored ? 0 : cfg.rank_m * K;
  }
  return 0;
}

inline DiversityReport fit_diversity_order(const SystemConfig& cfg, EvalMode mode,
                                           const std::vector<std::pair<double, double>>& curve,
                                           std::pair<double, double> window_db) {
  return {fit_diversity_slope(curve, window_db), expected_diversity_order(cfg, mode),
          window_db};
}

/// Terminal value of a curve that has flattened: returned when the relative
/// change across the final decade of rho is below 2%.
inline std::optional<double> detect_error_floor(
    const std::vector<std::pair<double, double>>& curve) {
  if (curve.size() < 2) return std::nullopt;
  double rho_hi = curve.back().first;
  double p_end = curve.back().second;
  if (!(p_end > 0.0)) return std::nullopt;
  for (auto [rho, p] : curve) {
    if (rho * 10.0 < rho_hi) continue;
    return std::abs(p - p_end) / p_end < 0.02 ? std::optional(p_end) : std::nullopt;
  }
  return std::nullopt;
}

struct ValidationRow {
  double snr_db = 0.0;
  EvalMode mode;
  double analytic = 0.0;
  double mc = 0.0;
  double mc_stderr = 0.0;
  double tolerance = 0.0;
  bool checked = false;  // only points with analytic >= 1e-3 gate the verdict
  bool pass = true;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  bool aggregate_pass = true;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double rel_tol = 0.05;
};

/// Cross-validates the closed forms against the simulator on an SNR grid.
/// A point passes when |analytic - MC| <= max(3*stderr, rel_tol*analytic);
/// the aggregate verdict covers points with analytic >= 1e-3.
inline ValidationReport validate_against_mc(const SystemConfig& cfg,
                                            const std::vector<EvalMode>& modes,
                                            const std::vector<double>& snr_db_grid,
                                            std::uint64_t trials, std::uint64_t seed,
                                            double rel_tol = 0.05) {
  if (trials < 10000)
    throw std::invalid_argument("validation needs at least 1e4 trials");
  OutageModel model(cfg);
  ValidationReport report;
  report.trials = trials;
  report.seed = seed;
  report.rel_tol = rel_tol;
  for (double snr_db : snr_db_grid) {
    double rho = db_to_linear(snr_db);
    McCounts counts = estimate_counts(cfg, rho, {trials, seed});
    for (EvalMode mode : modes) {
      ValidationRow row;
      row.snr_db = snr_db;
      row.mode = mode;
      row.analytic = model.cop(rho, mode).exact;
      row.mc = counts.p(mc_mode_index(mode));
      row.mc_stderr = std::sqrt(row.mc * (1.0 - row.mc) / double(trials));
      row.tolerance = std::max(3.0 * row.mc_stderr, rel_tol * row.analytic);
      row.checked = row.analytic >= 1e-3;
      row.pass = std::abs(row.analytic - row.mc) <= row.tolerance;
      if (row.checked && !row.pass) report.aggregate_pass = false;
      report.rows.push_back(row);
    }
  }
  return report;
}

/// A named sweep belonging to a figure reproduction.
struct LabeledSweep {
  std::string label;
  SystemConfig config;
  SweepSpec spec;
  bool throughput = false;  // emit throughput instead of COP (figure 9)
};

inline std::vector<double> linspace_grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (int i = 0; lo + i * step <= hi + 1e-9; ++i) g.push_back(lo + i * step);
  return g;
}

/// Desk-scale presets reproducing the experiment layout of figures 2-9.
/// trials == 0 leaves each preset's default (1e6 for simulated figures).
inline std::vector<LabeledSweep> figure_preset(int figure, std::uint64_t trials,
                                               std::uint64_t seed) {
  SystemConfig base;  // reference parameter set
  std::uint64_t mc = trials ? trials : 1000000;
  auto snr = linspace_grid(0, 45, 5);
  std::vector<EvalMode> n_all = {{Target::user_n, Sic::perfect, Formulation::exf},
                                 {Target::user_n, Sic::perfect, Formulation::alf},
                                 {Target::user_n, Sic::imperfect, Formulation::exf},
                                 {Target::user_n, Sic::imperfect, Formulation::alf}};
  std::vector<EvalMode> with_m = n_all;
  with_m.insert(with_m.begin(), {Target::user_m, Sic::perfect, Formulation::exf});

  std::vector<LabeledSweep> out;
  switch (figure) {
    case 2: {
      out.push_back({"fig2_ri-30", base, {SweepAxis::snr_db, snr, with_m, mc, seed}});
      for (double ri : {-25.0, -20.0}) {
        SystemConfig c = base;
        c.ri_power_total = db_to_linear(ri);
        std::vector<EvalMode> ip = {{Target::user_n, Sic::imperfect, Formulation::exf},
                                    {Target::user_n, Sic::imperfect, Formulation::alf}};
        out.push_back({"fig2_ri" + std::to_string(int(ri)), c,
                       {SweepAxis::snr_db, snr, ip, mc, seed}});
      }
      break;
    }
    case 3: {
      SystemConfig c = base;
      c.num_subcarriers = 1;
      c.rate_n = 0.1;
      c.rate_m = 0.5;
      out.push_back({"fig3_unequal_rates", c, {SweepAxis::snr_db, snr, with_m, mc, seed}});
      break;
    }
    case 4: {
      for (int k : {3, 1}) {
        SystemConfig c = base;
        c.num_subcarriers = k;
        out.push_back({"fig4_k" + std::to_string(k), c,
                       {SweepAxis::snr_db, snr, with_m, mc, seed}});
      }
      break;
    }
    case 5: {
      for (double radius : {2.0, 4.0})
        for (double alpha : {2.0, 3.0}) {
          SystemConfig c = base;
          c.disk_radius = radius;
          c.path_loss_exp = alpha;
          std::vector<EvalMode> modes = {
              {Target::user_m, Sic::perfect, Formulation::exf},
              {Target::user_n, Sic::perfect, Formulation::exf}};
          out.push_back({"fig5_rd" + std::to_string(int(radius)) + "_a" +
                             std::to_string(int(alpha)),
                         c, {SweepAxis::snr_db, snr, modes, mc, seed}});
        }
      break;
    }
    case 6: {
      for (double rate : {0.01, 0.5, 1.0}) {
        SystemConfig c = base;
        c.rate_m = c.rate_n = rate;
        std::vector<EvalMode> modes = {
            {Target::user_m, Sic::perfect, Formulation::exf},
            {Target::user_n, Sic::perfect, Formulation::exf},
            {Target::user_n, Sic::imperfect, Formulation::exf}};
        std::string tag = std::to_string(rate);
        tag.erase(tag.find_last_not_of('0') + 1);
        if (tag.back() == '.') tag.pop_back();
        out.push_back({"fig6_rate" + tag, c, {SweepAxis::snr_db, snr, modes, mc, seed}});
      }
      break;
    }
    case 7: {
      SystemConfig c = base;
      c.num_subcarriers = 1;
      c.rate_m = c.rate_n = 1.0;
      out.push_back({"fig7_pd_rate1", c, {SweepAxis::snr_db, snr, with_m, mc, seed}});
      break;
    }
    case 8: {
      std::vector<EvalMode> pair = {{Target::pair, Sic::perfect, Formulation::exf}};
      for (double snr_db : {10.0, 20.0, 30.0, 40.0}) {
        SweepSpec spec{SweepAxis::theta, linspace_grid(0.02, 0.98, 0.04), pair, 0, seed};
        spec.fixed_snr_db = snr_db;
        out.push_back({"fig8_theta_snr" + std::to_string(int(snr_db)), base, spec});
      }
      break;
    }
    case 9: {
      for (int k : {2, 1}) {
        SystemConfig c = base;
        c.num_subcarriers = k;
        c.rate_m = c.rate_n = 1.0;
        std::string kind = k == 2 ? "cd" : "pd";
        LabeledSweep psic{"fig9_tput_" + kind + "_psic", c,
                          {SweepAxis::snr_db, snr,
                           {{Target::user_n, Sic::perfect, Formulation::exf}}, 0, seed}};
        psic.throughput = true;
        out.push_back(psic);
        for (double ri : {-30.0, -20.0}) {
          SystemConfig ci = c;
          ci.ri_power_total = db_to_linear(ri);
          LabeledSweep s{"fig9_tput_" + kind + "_ipsic_ri" + std::to_string(int(ri)), ci,
                         {SweepAxis::snr_db, snr,
                          {{Target::user_n, Sic::imperfect, Formulation::exf}}, 0, seed}};
          s.throughput = true;
          out.push_back(s);
        }
      }
      break;
    }
    default:
      throw std::invalid_argument("figure presets cover figures 2..9");
  }
  return out;
}

/// Throughput rows reuse the sweep row schema with the rate in `exact`.
inline SweepResult run_throughput_sweep(const SystemConfig& cfg, const SweepSpec& spec) {
  check_sweep_spec(spec);
  if (spec.axis != SweepAxis::snr_db)
    throw std::invalid_argument("throughput sweeps run over the SNR axis");
  OutageModel model(cfg);
  SweepResult result{spec, cfg, {}};
  for (double snr_db : spec.grid) {
    double rho = db_to_linear(snr_db);
    for (EvalMode mode : spec.modes) {
      CopPoint row;
      row.axis = snr_db;
      row.mode = mode;
      row.exact = model.throughput(rho, mode.sic, mode.formulation);
      row.feasible = true;
      result.rows.push_back(row);
    }
  }
  return result;
}

}  // namespace unoma
