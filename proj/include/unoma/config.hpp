#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace unoma {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

enum class Sic { perfect, imperfect };
enum class Formulation { exf, alf };
enum class Target { user_m, user_n, pair };

/// One evaluation mode: which COP of the pair, with which SIC assumption and
/// which outage formulation. The formulation is irrelevant for the m-th user.
struct EvalMode {
  Target target = Target::user_n;
  Sic sic = Sic::perfect;
  Formulation formulation = Formulation::exf;

  friend bool operator==(const EvalMode&, const EvalMode&) = default;
};

inline std::string to_string(const EvalMode& mode) {
  if (mode.target == Target::user_m) return "m";
  std::string s = mode.target == Target::user_n ? "n" : "pair";
  s += mode.sic == Sic::perfect ? ":psic" : ":ipsic";
  s += mode.formulation == Formulation::exf ? ":exf" : ":alf";
  return s;
}

inline std::optional<EvalMode> parse_eval_mode(std::string_view text) {
  EvalMode mode;
  std::vector<std::string_view> parts;
  while (!text.empty()) {
    auto pos = text.find(':');
    parts.push_back(text.substr(0, pos));
    text = pos == std::string_view::npos ? std::string_view{} : text.substr(pos + 1);
  }
  if (parts.empty() || parts.size() > 3) return std::nullopt;
  if (parts[0] == "m") mode.target = Target::user_m;
  else if (parts[0] == "n") mode.target = Target::user_n;
  else if (parts[0] == "pair") mode.target = Target::pair;
  else return std::nullopt;
  if (parts.size() == 1) {
    return mode.target == Target::user_m ? std::optional(mode) : std::nullopt;
  }
  if (parts.size() < 3) return std::nullopt;
  if (parts[1] == "psic") mode.sic = Sic::perfect;
  else if (parts[1] == "ipsic") mode.sic = Sic::imperfect;
  else return std::nullopt;
  if (parts[2] == "exf") mode.formulation = Formulation::exf;
  else if (parts[2] == "alf") mode.formulation = Formulation::alf;
  else return std::nullopt;
  return mode;
}

/// The nine modes a sweep reports by default: the m-th user, and the n-th
/// user and the pair under every SIC x formulation combination.
inline std::vector<EvalMode> all_eval_modes() {
  std::vector<EvalMode> modes;
  modes.push_back({Target::user_m, Sic::perfect, Formulation::exf});
  for (Target t : {Target::user_n, Target::pair})
    for (Sic s : {Sic::perfect, Sic::imperfect})
      for (Formulation f : {Formulation::exf, Formulation::alf})
        modes.push_back({t, s, f});
  return modes;
}

enum class ThroughputPairing { as_printed, conventional };

/// All network parameters. Defaults follow the reference parameter set used
/// throughout the experiments (M=3 users over K=2 subcarriers, pair ranks
/// (1,2), 0.8/0.2 power split, 0.01 BPCU rates, alpha=2, 2 m disk,
/// -30 dB total residual-interference power).
struct SystemConfig {
  int num_users = 3;        // M
  int num_subcarriers = 2;  // K; K=1 selects the single-carrier (PD) special case
  int rank_m = 1;           // order index of the weaker paired user
  int rank_n = 2;           // order index of the stronger paired user
  double a_m = 0.8;         // power allocation coefficient, weaker user
  double a_n = 0.2;         // power allocation coefficient, stronger user
  double rate_m = 0.01;     // target rate [BPCU]
  double rate_n = 0.01;     // target rate [BPCU]
  double path_loss_exp = 2.0;
  double eta = 1.0;             // frequency dependent factor
  double disk_radius = 2.0;     // user-zone radius [m]
  double ri_power_total = 1e-3; // E{||h_I||^2}, linear, over all K subcarriers
  int chebyshev_nodes = 15;     // U
  int laguerre_nodes = 64;      // semi-infinite rule size
  ThroughputPairing throughput_pairing = ThroughputPairing::as_printed;

  /// Per-subcarrier residual-interference variance.
  double ri_per_subcarrier() const { return ri_power_total / num_subcarriers; }
};

enum class ConfigError { power_split, order, negative };

struct ConfigIssue {
  ConfigError code;
  std::string message;
};

inline const char* to_string(ConfigError e) {
  switch (e) {
    case ConfigError::power_split: return "POWER_SPLIT";
    case ConfigError::order: return "ORDER";
    case ConfigError::negative: return "NEGATIVE";
  }
  return "?";
}

/// Checks every construction invariant; returns the first violation found.
inline std::optional<ConfigIssue> validate(const SystemConfig& c) {
  auto issue = [](ConfigError e, std::string msg) {
    return std::optional<ConfigIssue>(ConfigIssue{e, std::move(msg)});
  };
  if (c.num_users < 1) return issue(ConfigError::negative, "num_users must be positive");
  if (c.num_subcarriers < 1) return issue(ConfigError::negative, "num_subcarriers must be positive");
  if (!(c.rate_m > 0.0) || !(c.rate_n > 0.0))
    return issue(ConfigError::negative, "target rates must be positive");
  if (!(c.path_loss_exp >= 2.0))
    return issue(ConfigError::negative, "path_loss_exp must be >= 2");
  if (!(c.eta > 0.0)) return issue(ConfigError::negative, "eta must be positive");
  if (!(c.disk_radius > 0.0)) return issue(ConfigError::negative, "disk_radius must be positive");
  if (!(c.ri_power_total >= 0.0))
    return issue(ConfigError::negative, "ri_power_total must be non-negative");
  if (c.chebyshev_nodes < 1) return issue(ConfigError::negative, "chebyshev_nodes must be positive");
  if (c.laguerre_nodes < 1) return issue(ConfigError::negative, "laguerre_nodes must be positive");
  if (c.rank_m < 1 || c.rank_n <= c.rank_m || c.rank_n > c.num_users)
    return issue(ConfigError::order, "pair ranks must satisfy 1 <= m < n <= M");
  if (!(c.a_m > 0.0) || !(c.a_n > 0.0) || std::abs(c.a_m + c.a_n - 1.0) > 1e-12 ||
      !(c.a_m > c.a_n))
    return issue(ConfigError::power_split,
                 "power split must satisfy a_m + a_n = 1 with a_m > a_n > 0");
  return std::nullopt;
}

/// Throwing variant for call sites that cannot proceed on a bad config.
inline SystemConfig validated(const SystemConfig& c) {
  if (auto bad = validate(c))
    throw std::invalid_argument(std::string(to_string(bad->code)) + ": " + bad->message);
  return c;
}

/// A threshold together with its feasibility. An infeasible threshold means
/// the corresponding decode event fails for every channel realization; the
/// value is +inf so that downstream CDF evaluation saturates consistently.
struct GainThreshold {
  double value = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

/// Effective-gain thresholds shared by the analytic and Monte Carlo paths.
/// All values are in linear units at a given transmit SNR rho.
struct DerivedThresholds {
  double snr = 0.0;             // rho, linear
  double threshold_m = 0.0;     // 2^{R_m} - 1
  double threshold_n = 0.0;     // 2^{R_n} - 1
  GainThreshold decode_m;       // gain below which decoding the m-th signal fails
  double decode_n_sic = 0.0;    // gain threshold for the n-th user after SIC (noise part)
  double ri_gain_slope = 0.0;   // multiplies the RI power in the post-SIC threshold
  GainThreshold direct_n;       // gain threshold for decoding n directly (m as interference)
  GainThreshold joint_n;        // min(decode_m, direct_n) for the joint ALF event
};

inline DerivedThresholds derive_thresholds(const SystemConfig& c, double rho) {
  if (!(rho > 0.0)) throw std::domain_error("SNR must be positive");
  DerivedThresholds t;
  t.snr = rho;
  t.threshold_m = std::exp2(c.rate_m) - 1.0;
  t.threshold_n = std::exp2(c.rate_n) - 1.0;
  if (c.a_m > t.threshold_m * c.a_n)
    t.decode_m = {t.threshold_m / (rho * (c.a_m - t.threshold_m * c.a_n)), true};
  t.decode_n_sic = t.threshold_n / (rho * c.a_n);
  t.ri_gain_slope = t.threshold_n / c.a_n;
  if (c.a_n > t.threshold_n * c.a_m)
    t.direct_n = {t.threshold_n / (rho * (c.a_n - t.threshold_n * c.a_m)), true};
  if (t.decode_m.feasible && t.direct_n.feasible)
    t.joint_n = {std::min(t.decode_m.value, t.direct_n.value), true};
  else if (t.decode_m.feasible)
    t.joint_n = t.decode_m;
  else if (t.direct_n.feasible)
    t.joint_n = t.direct_n;
  return t;
}

}  // namespace unoma
