#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "unoma/config.hpp"
#include "unoma/distributions.hpp"
#include "unoma/quadrature.hpp"

namespace unoma {

/// One analytic COP evaluation. `exact` is the closed-form value clamped into
/// [0,1]; `clamped` reports whether clamping actually moved it (the printed
/// ALF expression can leave [0,1] outside its validity domain).
/// `feasible == false` means the power split cannot support the decode at any
/// gain, in which case exact == 1.
struct CopValue {
  double exact = 1.0;
  double asymptotic = 1.0;
  bool feasible = false;
  bool clamped = false;
  EvalMode mode;
  double snr = 0.0;
};

/// Closed-form and asymptotic COP evaluators for one validated config.
/// Stateless after construction; safe for concurrent use.
class OutageModel {
 public:
  explicit OutageModel(const SystemConfig& cfg)
      : cfg_(validated(cfg)),
        cheb_(build_chebyshev_table(cfg.chebyshev_nodes, cfg.disk_radius,
                                    cfg.path_loss_exp)),
        laguerre_(build_gauss_laguerre(cfg.laguerre_nodes)) {}

  const SystemConfig& config() const { return cfg_; }
  const ChebyshevTable& chebyshev() const { return cheb_; }
  const GaussLaguerreRule& laguerre() const { return laguerre_; }

  /// Marginal CDF of one user's effective gain (distance + fading), as the
  /// Gauss-Chebyshev sum of Erlang CDFs over the disk, clamped into [0,1].
  double unsorted_gain_cdf(double z) const {
    if (!(z > 0.0)) return 0.0;
    if (std::isinf(z)) return 1.0;
    double s = 0.0;
    for (int u = 0; u < cheb_.nodes; ++u)
      s += cheb_.weight[u] *
           erlang_cdf(z * cheb_.distance_factor[u] / cfg_.eta, cfg_.num_subcarriers);
    return std::clamp(s, 0.0, 1.0);
  }

  /// CDF of the rank-th smallest effective gain among the M users.
  double sorted_gain_cdf(double z, int rank) const {
    return order_stat_transform(unsorted_gain_cdf(z), rank, cfg_.num_users);
  }

  /// CDF of the m-th user's SINR at threshold x (requires a_m > x a_n).
  double sinr_cdf_m(double x, double rho) const {
    double margin = cfg_.a_m - x * cfg_.a_n;
    if (!(margin > 0.0)) return 1.0;
    return sorted_gain_cdf(x / (rho * margin), cfg_.rank_m);
  }

  CopValue cop(double rho, EvalMode mode) const {
    switch (mode.target) {
      case Target::user_m: return cop_user_m(rho);
      case Target::user_n: return cop_user_n(rho, mode.sic, mode.formulation);
      case Target::pair: return cop_pair(rho, mode.sic, mode.formulation);
    }
    throw std::logic_error("unreachable");
  }

  CopValue cop_user_m(double rho) const {
    auto t = derive_thresholds(cfg_, rho);
    CopValue v;
    v.mode = {Target::user_m, Sic::perfect, Formulation::exf};
    v.snr = rho;
    v.asymptotic = asymptotic_user_m(t);
    if (!t.decode_m.feasible) return v;  // outage certain
    v.feasible = true;
    v.exact = sorted_gain_cdf(t.decode_m.value, cfg_.rank_m);
    return v;
  }

  CopValue cop_user_n(double rho, Sic sic, Formulation form) const {
    auto t = derive_thresholds(cfg_, rho);
    CopValue v;
    v.mode = {Target::user_n, sic, form};
    v.snr = rho;
    v.asymptotic = asymptotic_user_n(t, sic, form);
    double raw;
    if (!t.decode_m.feasible) {
      // Decoding the m-th signal fails for every realization. Under EXF the
      // outage is certain; under ALF the direct-decode branch remains.
      if (form == Formulation::exf || !t.direct_n.feasible) return v;
      raw = sorted_n(t.direct_n.value);
      v.feasible = true;
    } else {
      v.feasible = true;
      double sic_branch =  // Pr of the post-SIC decode failure window term
          (sic == Sic::perfect || cfg_.ri_power_total == 0.0)
              ? sorted_n(t.decode_n_sic)
              : erlang_expectation(
                    [&](double y) {
                      return sorted_n(t.ri_gain_slope * y + t.decode_n_sic);
                    },
                    cfg_.num_subcarriers, cfg_.ri_per_subcarrier(), laguerre_);
      raw = form == Formulation::exf
                ? sic_branch
                : sorted_n(t.joint_n.value) + sic_branch - sorted_n(t.decode_m.value);
    }
    v.clamped = raw < 0.0 || raw > 1.0;
    v.exact = std::clamp(raw, 0.0, 1.0);
    return v;
  }

  CopValue cop_pair(double rho, Sic sic, Formulation form) const {
    CopValue pm = cop_user_m(rho);
    CopValue pn = cop_user_n(rho, sic, form);
    CopValue v;
    v.mode = {Target::pair, sic, form};
    v.snr = rho;
    v.feasible = pm.feasible && pn.feasible;
    v.clamped = pm.clamped || pn.clamped;
    v.exact = 1.0 - (1.0 - pm.exact) * (1.0 - pn.exact);
    v.asymptotic =
        pm.asymptotic + pn.asymptotic - pm.asymptotic * pn.asymptotic;
    return v;
  }

  double asymptotic(double rho, EvalMode mode) const { return cop(rho, mode).asymptotic; }

  /// Delay-limited throughput [BPCU]. The default pairing multiplies the
  /// m-th user's success by R_n and vice versa, matching the analysis it
  /// implements; `conventional` pairs each user's success with its own rate.
  double throughput(double rho, Sic sic, Formulation form) const {
    double pm = cop_user_m(rho).exact;
    double pn = cop_user_n(rho, sic, form).exact;
    if (cfg_.throughput_pairing == ThroughputPairing::conventional)
      return (1.0 - pm) * cfg_.rate_m + (1.0 - pn) * cfg_.rate_n;
    return (1.0 - pm) * cfg_.rate_n + (1.0 - pn) * cfg_.rate_m;
  }

 private:
  double sorted_n(double z) const { return sorted_gain_cdf(z, cfg_.rank_n); }

  /// sum_u b_u (threshold c_u / eta)^K / K!, the high-SNR kernel.
  double power_law_kernel(double threshold) const {
    double s = 0.0;
    for (int u = 0; u < cheb_.nodes; ++u)
      s += cheb_.weight[u] *
           std::pow(threshold * cheb_.distance_factor[u] / cfg_.eta,
                    cfg_.num_subcarriers);
    return s / factorial_d(cfg_.num_subcarriers);
  }

  double power_law(double threshold, int rank) const {
    return binomial_d(cfg_.num_users, rank) *
           std::pow(power_law_kernel(threshold), rank);
  }

  double asymptotic_user_m(const DerivedThresholds& t) const {
    if (!t.decode_m.feasible) return 1.0;
    return std::min(1.0, power_law(t.decode_m.value, cfg_.rank_m));
  }

  /// SNR-independent ipSIC limit: the post-SIC threshold degenerates to
  /// slope * Y with Y the residual-interference power.
  double ipsic_floor(const DerivedThresholds& t) const {
    if (cfg_.ri_power_total == 0.0) return 0.0;
    return erlang_expectation(
        [&](double y) { return sorted_n(t.ri_gain_slope * y); },
        cfg_.num_subcarriers, cfg_.ri_per_subcarrier(), laguerre_);
  }

  double asymptotic_user_n(const DerivedThresholds& t, Sic sic, Formulation form) const {
    int n = cfg_.rank_n;
    if (!t.decode_m.feasible) {
      if (form == Formulation::exf || !t.direct_n.feasible) return 1.0;
      return std::min(1.0, power_law(t.direct_n.value, n));
    }
    bool perfect = sic == Sic::perfect || cfg_.ri_power_total == 0.0;
    if (form == Formulation::exf)
      return perfect ? std::min(1.0, power_law(t.decode_n_sic, n)) : ipsic_floor(t);
    double head = power_law(t.joint_n.value, n) - power_law(t.decode_m.value, n);
    double raw = perfect ? head + power_law(t.decode_n_sic, n) : head + ipsic_floor(t);
    return std::clamp(raw, 0.0, 1.0);
  }

  SystemConfig cfg_;
  ChebyshevTable cheb_;
  GaussLaguerreRule laguerre_;
};

/// Convenience wrapper matching the one-shot call shape.
inline double cdf_sorted_gain(const SystemConfig& cfg, double z, int rank) {
  return OutageModel(cfg).sorted_gain_cdf(z, rank);
}

}  // namespace unoma
