#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "unoma/config.hpp"
#include "unoma/rng.hpp"

namespace unoma {

/// One draw of the physical model: disk-uniform positions, per-subcarrier
/// Rayleigh gains combined under bounded path loss, ascending sort, and the
/// aggregate residual-interference power.
struct ChannelRealization {
  std::vector<double> distance;     // per user, <= disk radius
  std::vector<double> gain;         // per user pre-sort effective gain
  std::vector<double> sorted_gain;  // ascending
  double ri_power = 0.0;            // ||h_I||^2
};

/// Fixed consumption order per draw (distances, then M*K gain pairs, then K
/// RI pairs) so a stream position is a pure function of the trial index.
inline ChannelRealization sample_realization(const SystemConfig& cfg, PhiloxStream& rng) {
  ChannelRealization r;
  int M = cfg.num_users, K = cfg.num_subcarriers;
  r.distance.resize(M);
  r.gain.resize(M);
  for (int i = 0; i < M; ++i)
    r.distance[i] = cfg.disk_radius * std::sqrt(rng.next_uniform());
  for (int i = 0; i < M; ++i) {
    double fading = 0.0;
    for (int k = 0; k < K; ++k) fading += rng.next_complex_gain_power(1.0);
    r.gain[i] = cfg.eta / (1.0 + std::pow(r.distance[i], cfg.path_loss_exp)) * fading;
  }
  r.sorted_gain = r.gain;
  std::sort(r.sorted_gain.begin(), r.sorted_gain.end());
  double ri = 0.0;
  for (int k = 0; k < K; ++k)
    ri += rng.next_complex_gain_power(cfg.ri_per_subcarrier());
  r.ri_power = ri;
  return r;
}

/// SINRs of the paired users per one realization. The paired users sit at
/// ranks m and n of the sorted gains; signal and interference share one
/// effective gain per user (equal column weights of the spreading matrix).
struct SinrRecord {
  double m_self = 0.0;       // m-th user decoding itself
  double n_decode_m = 0.0;   // n-th user decoding the m-th signal
  double n_self_psic = 0.0;  // n-th user post-SIC, no residue
  double n_self_ipsic = 0.0; // n-th user post-SIC with residual interference
  double n_direct = 0.0;     // n-th user decoding itself, m treated as noise
};

inline SinrRecord compute_sinrs(const ChannelRealization& r, const SystemConfig& cfg,
                                double rho) {
  double zm = r.sorted_gain[cfg.rank_m - 1];
  double zn = r.sorted_gain[cfg.rank_n - 1];
  SinrRecord s;
  s.m_self = rho * zm * cfg.a_m / (rho * zm * cfg.a_n + 1.0);
  s.n_decode_m = rho * zn * cfg.a_m / (rho * zn * cfg.a_n + 1.0);
  s.n_self_psic = rho * zn * cfg.a_n;
  s.n_self_ipsic = rho * zn * cfg.a_n / (rho * r.ri_power + 1.0);
  s.n_direct = rho * zn * cfg.a_n / (rho * zn * cfg.a_m + 1.0);
  return s;
}

/// Outage indicators for every SIC x formulation branch of one realization.
struct OutageFlags {
  bool user_m = false;
  std::array<std::array<bool, 2>, 2> user_n{};  // [sic][formulation]

  bool n(Sic sic, Formulation f) const {
    return user_n[sic == Sic::imperfect][f == Formulation::alf];
  }
  bool pair(Sic sic, Formulation f) const { return user_m || n(sic, f); }
  bool of(EvalMode mode) const {
    switch (mode.target) {
      case Target::user_m: return user_m;
      case Target::user_n: return n(mode.sic, mode.formulation);
      case Target::pair: return pair(mode.sic, mode.formulation);
    }
    return false;
  }
};

inline OutageFlags outage_events(const SinrRecord& s, const DerivedThresholds& t) {
  OutageFlags f;
  f.user_m = s.m_self < t.threshold_m;
  bool miss_m = s.n_decode_m <= t.threshold_m;
  bool direct_fail = s.n_direct <= t.threshold_n;
  for (bool imperfect : {false, true}) {
    double self = imperfect ? s.n_self_ipsic : s.n_self_psic;
    bool sic_fail = !miss_m && self <= t.threshold_n;
    f.user_n[imperfect][0] = miss_m || sic_fail;                    // EXF
    f.user_n[imperfect][1] = (miss_m && direct_fail) || sic_fail;  // ALF
  }
  return f;
}

struct OutageEstimate {
  double p_hat = 0.0;
  double stderr_ = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  EvalMode mode;
};

struct McOptions {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::uint32_t chunk_size = 16384;  // part of the determinism contract
  unsigned threads = 0;              // 0 = hardware concurrency
};

/// Counts from one pass over the realizations, covering all nine modes plus
/// the per-trial EXF/ALF disagreement tallies. Bit-identical for identical
/// (cfg, rho, trials, seed, chunk_size) irrespective of thread count: chunk c
/// uses the Philox stream (seed, c) and contributes an integer count.
struct McCounts {
  std::array<std::uint64_t, 9> outage{};  // order of all_eval_modes()
  std::uint64_t exf_alf_psic_mismatch = 0;
  std::uint64_t exf_alf_ipsic_mismatch = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  double p(std::size_t mode_index) const {
    return double(outage[mode_index]) / double(trials);
  }
};

namespace detail {

inline McCounts run_chunk(const SystemConfig& cfg, const DerivedThresholds& t,
                          double rho, std::uint64_t seed, std::uint64_t chunk_index,
                          std::uint64_t count) {
  McCounts c;
  PhiloxStream rng(seed, chunk_index);
  for (std::uint64_t i = 0; i < count; ++i) {
    auto real = sample_realization(cfg, rng);
    auto flags = outage_events(compute_sinrs(real, cfg, rho), t);
    c.outage[0] += flags.user_m;
    std::size_t idx = 1;
    for (bool imperfect : {false, true})
      for (bool alf : {false, true})
        c.outage[idx++] += flags.user_n[imperfect][alf];
    for (bool imperfect : {false, true})
      for (bool alf : {false, true})
        c.outage[idx++] += flags.user_m || flags.user_n[imperfect][alf];
    c.exf_alf_psic_mismatch += flags.user_n[0][0] != flags.user_n[0][1];
    c.exf_alf_ipsic_mismatch += flags.user_n[1][0] != flags.user_n[1][1];
  }
  return c;
}

}  // namespace detail

/// Mode order produced by estimate_counts: m, then n and pair each as
/// (psic,exf), (psic,alf), (ipsic,exf), (ipsic,alf).
inline std::vector<EvalMode> mc_mode_order() {
  std::vector<EvalMode> modes;
  modes.push_back({Target::user_m, Sic::perfect, Formulation::exf});
  for (Target t : {Target::user_n, Target::pair})
    for (Sic s : {Sic::perfect, Sic::imperfect})
      for (Formulation f : {Formulation::exf, Formulation::alf})
        modes.push_back({t, s, f});
  return modes;
}

inline std::size_t mc_mode_index(EvalMode mode) {
  if (mode.target == Target::user_m) return 0;
  std::size_t base = mode.target == Target::user_n ? 1 : 5;
  return base + (mode.sic == Sic::imperfect ? 2 : 0) +
         (mode.formulation == Formulation::alf ? 1 : 0);
}

inline McCounts estimate_counts(const SystemConfig& cfg, double rho,
                                const McOptions& opt) {
  if (opt.trials < 1) throw std::domain_error("estimate_counts: need at least one trial");
  auto t = derive_thresholds(cfg, rho);
  std::uint64_t chunks = (opt.trials + opt.chunk_size - 1) / opt.chunk_size;
  unsigned workers = opt.threads ? opt.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, chunks));

  McCounts total;
  total.trials = opt.trials;
  total.seed = opt.seed;
  auto chunk_len = [&](std::uint64_t c) {
    std::uint64_t begin = c * opt.chunk_size;
    return std::min<std::uint64_t>(opt.chunk_size, opt.trials - begin);
  };
  auto merge = [&](const McCounts& c) {
    for (std::size_t i = 0; i < total.outage.size(); ++i) total.outage[i] += c.outage[i];
    total.exf_alf_psic_mismatch += c.exf_alf_psic_mismatch;
    total.exf_alf_ipsic_mismatch += c.exf_alf_ipsic_mismatch;
  };

  if (workers == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c)
      merge(detail::run_chunk(cfg, t, rho, opt.seed, c, chunk_len(c)));
    return total;
  }
  // Workers pull chunk indices from a shared counter; each chunk's
  // contribution is an integer count, so the commutative merge keeps the
  // total independent of scheduling.
  std::atomic<std::uint64_t> next{0};
  std::vector<McCounts> partial(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::uint64_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
        McCounts got = detail::run_chunk(cfg, t, rho, opt.seed, c, chunk_len(c));
        for (std::size_t i = 0; i < partial[w].outage.size(); ++i)
          partial[w].outage[i] += got.outage[i];
        partial[w].exf_alf_psic_mismatch += got.exf_alf_psic_mismatch;
        partial[w].exf_alf_ipsic_mismatch += got.exf_alf_ipsic_mismatch;
      }
    });
  for (auto& th : pool) th.join();
  for (const auto& p : partial) merge(p);
  return total;
}

inline OutageEstimate estimate_cop(const SystemConfig& cfg, double rho, EvalMode mode,
                                   const McOptions& opt) {
  McCounts counts = estimate_counts(cfg, rho, opt);
  OutageEstimate e;
  e.mode = mode;
  e.trials = opt.trials;
  e.seed = opt.seed;
  e.p_hat = counts.p(mc_mode_index(mode));
  e.stderr_ = std::sqrt(e.p_hat * (1.0 - e.p_hat) / double(opt.trials));
  return e;
}

}  // namespace unoma
