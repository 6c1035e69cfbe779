#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pd_reference.hpp"
#include "unoma/outage.hpp"

using namespace unoma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SystemConfig reference() { return SystemConfig{}; }

SystemConfig pd_fig3() {
  SystemConfig cfg;
  cfg.num_subcarriers = 1;
  cfg.rate_n = 0.1;
  cfg.rate_m = 0.5;
  return cfg;
}

EvalMode n_mode(Sic sic, Formulation f) { return {Target::user_n, sic, f}; }

}  // namespace

TEST_CASE("sorted gain CDF reference values") {
  OutageModel model(reference());
  CHECK_THAT(model.unsorted_gain_cdf(0.01), WithinRel(5.060901745278251e-4, 1e-12));
  CHECK_THAT(model.sorted_gain_cdf(0.01, 1), WithinRel(1.517502271412707e-3, 1e-12));
  CHECK_THAT(model.sorted_gain_cdf(0.01, 2), WithinRel(7.681225472765724e-7, 1e-12));
}

TEST_CASE("sorted gain CDF vanishes at zero threshold and saturates") {
  OutageModel model(reference());
  CHECK(model.sorted_gain_cdf(0.0, 1) == 0.0);
  CHECK(model.sorted_gain_cdf(1e-300, 2) >= 0.0);
  CHECK(model.sorted_gain_cdf(1e-12, 1) < 1e-15);
  CHECK(model.sorted_gain_cdf(1e6, 2) == 1.0);
}

TEST_CASE("K=1 collapses the fading sum to a bare exponential kernel") {
  SystemConfig cfg = reference();
  cfg.num_subcarriers = 1;
  OutageModel model(cfg);
  auto table = build_chebyshev_table(cfg.chebyshev_nodes, cfg.disk_radius,
                                     cfg.path_loss_exp);
  for (double z : {1e-4, 0.01, 0.3, 2.0})
    CHECK_THAT(model.unsorted_gain_cdf(z), WithinAbs(pd_ref::kernel(table, z, cfg.eta), 1e-14));
}

TEST_CASE("SINR CDF of the m-th user maps thresholds through the gain transform") {
  OutageModel model(reference());
  double rho = 100.0;
  double x = 0.01;
  double z = x / (rho * (0.8 - x * 0.2));
  CHECK_THAT(model.sinr_cdf_m(x, rho), WithinRel(model.sorted_gain_cdf(z, 1), 1e-14));
  CHECK(model.sinr_cdf_m(4.0, rho) == 1.0);   // at the feasibility boundary
  CHECK(model.sinr_cdf_m(5.0, rho) == 1.0);   // beyond it
  CHECK(model.sinr_cdf_m(1e-9, rho) < 1e-12); // x -> 0+
}

TEST_CASE("m-th user COP reference curve") {
  OutageModel model(reference());
  CHECK_THAT(model.cop_user_m(1.0).exact, WithinRel(1.155000740168272e-3, 1e-12));
  CHECK_THAT(model.cop_user_m(10.0).exact, WithinRel(1.178435648196182e-5, 1e-12));
  CHECK_THAT(model.cop_user_m(100.0).exact, WithinRel(1.180769620135784e-7, 1e-12));
  CHECK_THAT(model.cop_user_m(1000.0).exact, WithinRel(1.181002907301937e-9, 1e-12));
}

TEST_CASE("m-th user COP tends to zero at high SNR and is feasibility-aware") {
  OutageModel model(reference());
  CHECK(model.cop_user_m(1e8).exact < 1e-15);

  SystemConfig bad = reference();
  bad.a_m = 0.6;
  bad.a_n = 0.4;
  bad.rate_m = 2.0;  // threshold 3 > a_m/a_n = 1.5
  OutageModel infeasible(bad);
  auto v = infeasible.cop_user_m(1e4);
  CHECK(v.exact == 1.0);
  CHECK_FALSE(v.feasible);
  CHECK(infeasible.cop_user_n(1e4, Sic::perfect, Formulation::exf).exact == 1.0);
}

TEST_CASE("m-th user asymptote and exact agree at high SNR") {
  OutageModel model(reference());
  CHECK_THAT(model.cop_user_m(1000.0).asymptotic,
             WithinRel(1.181028826846225e-9, 1e-12));
  auto v = model.cop_user_m(db_to_linear(50.0));
  CHECK(v.exact / v.asymptotic > 0.9);
  CHECK(v.exact / v.asymptotic < 1.1);
}

TEST_CASE("asymptotes follow exact power laws in SNR") {
  // decade ratio in log10 equals the diversity order by construction
  SystemConfig cfg = reference();
  for (int k : {1, 2, 3}) {
    cfg.num_subcarriers = k;
    OutageModel model(cfg);
    double a1 = model.cop_user_m(1e3).asymptotic;
    double a2 = model.cop_user_m(1e4).asymptotic;
    CHECK_THAT(std::log10(a1) - std::log10(a2), WithinAbs(cfg.rank_m * k, 1e-9));
    double b1 = model.cop_user_n(1e3, Sic::perfect, Formulation::exf).asymptotic;
    double b2 = model.cop_user_n(1e4, Sic::perfect, Formulation::exf).asymptotic;
    CHECK_THAT(std::log10(b1) - std::log10(b2), WithinAbs(cfg.rank_n * k, 1e-9));
  }
}

TEST_CASE("n-th user COP reference values") {
  OutageModel model(reference());
  CHECK_THAT(model.cop_user_n(1.0, Sic::perfect, Formulation::exf).exact,
             WithinRel(9.896376291275991e-5, 1e-12));
  CHECK_THAT(model.cop_user_n(1.0, Sic::imperfect, Formulation::exf).exact,
             WithinRel(9.934262511683373e-5, 1e-11));
  CHECK_THAT(model.cop_user_n(100.0, Sic::perfect, Formulation::exf).exact,
             WithinRel(1.179926705590687e-12, 1e-11));
  CHECK_THAT(model.cop_user_n(100.0, Sic::imperfect, Formulation::exf).exact,
             WithinRel(1.772760014144864e-12, 1e-11));
  CHECK_THAT(model.cop_user_n(1000.0, Sic::imperfect, Formulation::exf).exact,
             WithinRel(3.957390555544831e-15, 1e-11));
}

TEST_CASE("equal rates make the two formulations identical") {
  OutageModel model(reference());
  for (double snr_db : {0.0, 10.0, 25.0, 40.0}) {
    double rho = db_to_linear(snr_db);
    for (Sic sic : {Sic::perfect, Sic::imperfect}) {
      double exf = model.cop_user_n(rho, sic, Formulation::exf).exact;
      double alf = model.cop_user_n(rho, sic, Formulation::alf).exact;
      CHECK(std::abs(exf - alf) <= 1e-10);
    }
  }
}

TEST_CASE("unequal rates favor the alternative formulation") {
  OutageModel model(pd_fig3());
  CHECK_THAT(model.cop_user_n(100.0, Sic::imperfect, Formulation::alf).exact,
             WithinRel(2.091563796159913e-4, 1e-11));
  CHECK_THAT(model.cop_user_n(100.0, Sic::imperfect, Formulation::exf).exact,
             WithinRel(4.175900136685214e-4, 1e-11));
  for (double snr_db : {10.0, 20.0, 30.0}) {
    double rho = db_to_linear(snr_db);
    for (Sic sic : {Sic::perfect, Sic::imperfect}) {
      double exf = model.cop_user_n(rho, sic, Formulation::exf).exact;
      double alf = model.cop_user_n(rho, sic, Formulation::alf).exact;
      CHECK(alf < exf);
    }
  }
}

TEST_CASE("perfect-SIC value ignores the residual interference power") {
  SystemConfig cfg = reference();
  OutageModel a(cfg);
  cfg.ri_power_total = db_to_linear(-10.0);
  OutageModel b(cfg);
  cfg.ri_power_total = 0.0;
  OutageModel c(cfg);
  double va = a.cop_user_n(31.62, Sic::perfect, Formulation::exf).exact;
  CHECK(va == b.cop_user_n(31.62, Sic::perfect, Formulation::exf).exact);
  CHECK(va == c.cop_user_n(31.62, Sic::perfect, Formulation::exf).exact);
  // zero RI power collapses ipSIC onto pSIC
  CHECK(c.cop_user_n(31.62, Sic::imperfect, Formulation::exf).exact == va);
}

TEST_CASE("imperfect SIC never beats perfect SIC") {
  for (const SystemConfig& cfg : {reference(), pd_fig3()}) {
    OutageModel model(cfg);
    for (double snr_db = -10.0; snr_db <= 60.0; snr_db += 7.0) {
      double rho = db_to_linear(snr_db);
      for (Formulation f : {Formulation::exf, Formulation::alf}) {
        double p = model.cop_user_n(rho, Sic::perfect, f).exact;
        double ip = model.cop_user_n(rho, Sic::imperfect, f).exact;
        CHECK(p <= ip + 1e-12);
      }
    }
  }
}

TEST_CASE("ipSIC exact COP settles onto the analytic floor") {
  // floor ordering across RI levels and 60 dB agreement within 1%
  double prev_floor = 0.0;
  for (double ri_db : {-30.0, -25.0, -20.0}) {
    SystemConfig cfg = reference();
    cfg.ri_power_total = db_to_linear(ri_db);
    OutageModel model(cfg);
    double floor = model.cop_user_n(db_to_linear(60.0), Sic::imperfect,
                                    Formulation::exf).asymptotic;
    double exact = model.cop_user_n(db_to_linear(60.0), Sic::imperfect,
                                    Formulation::exf).exact;
    CHECK(std::abs(exact - floor) / floor < 0.01);
    CHECK(floor > prev_floor);
    prev_floor = floor;
  }
}

TEST_CASE("ipSIC floor reference values (RI -30 dB)") {
  OutageModel model(reference());
  double exact50 = model.cop_user_n(db_to_linear(50.0), Sic::imperfect,
                                    Formulation::exf).exact;
  double floor = model.cop_user_n(db_to_linear(50.0), Sic::imperfect,
                                  Formulation::exf).asymptotic;
  CHECK_THAT(exact50, WithinRel(9.003146247023403e-16, 1e-9));
  CHECK_THAT(floor, WithinRel(8.860316378552688e-16, 1e-9));
  // the floor is SNR-independent
  CHECK(floor == model.cop_user_n(db_to_linear(20.0), Sic::imperfect,
                                  Formulation::exf).asymptotic);
  // at 50 dB the exact value still carries ~1.6% of SNR-dependent mass
  CHECK_THAT(exact50 / floor, WithinAbs(1.0161, 5e-3));
}

TEST_CASE("floor flatness between 45 and 60 dB") {
  for (auto [ri_db, flatness] : {std::pair{-25.0, 0.0157}, std::pair{-20.0, 0.0049}}) {
    SystemConfig cfg = reference();
    cfg.ri_power_total = db_to_linear(ri_db);
    OutageModel model(cfg);
    double p45 = model.cop_user_n(db_to_linear(45.0), Sic::imperfect, Formulation::exf).exact;
    double p60 = model.cop_user_n(db_to_linear(60.0), Sic::imperfect, Formulation::exf).exact;
    CHECK(std::abs(p45 - p60) / p60 < 0.02);
    CHECK_THAT(std::abs(p45 - p60) / p60, WithinAbs(flatness, 2e-3));
  }
  // at -30 dB RI the 45 dB point is not yet inside the 2% band
  OutageModel model(reference());
  double p45 = model.cop_user_n(db_to_linear(45.0), Sic::imperfect, Formulation::exf).exact;
  double p60 = model.cop_user_n(db_to_linear(60.0), Sic::imperfect, Formulation::exf).exact;
  CHECK_THAT(std::abs(p45 - p60) / p60, WithinAbs(0.0501, 3e-3));
}

TEST_CASE("pair COP composes the single-user terms") {
  OutageModel model(reference());
  for (double snr_db : {0.0, 15.0, 30.0}) {
    double rho = db_to_linear(snr_db);
    for (Sic sic : {Sic::perfect, Sic::imperfect}) {
      double pm = model.cop_user_m(rho).exact;
      double pn = model.cop_user_n(rho, sic, Formulation::exf).exact;
      auto pair = model.cop_pair(rho, sic, Formulation::exf);
      CHECK_THAT(pair.exact, WithinRel(1.0 - (1.0 - pm) * (1.0 - pn), 1e-13));
      CHECK(pair.exact >= std::max(pm, pn));
      CHECK_THAT(pair.asymptotic,
                 WithinRel(model.cop_user_m(rho).asymptotic +
                               model.cop_user_n(rho, sic, Formulation::exf).asymptotic -
                               model.cop_user_m(rho).asymptotic *
                                   model.cop_user_n(rho, sic, Formulation::exf).asymptotic,
                           1e-12));
    }
  }
}

TEST_CASE("pair COP absorbs a certain outage") {
  SystemConfig bad = reference();
  bad.a_m = 0.6;
  bad.a_n = 0.4;
  bad.rate_m = 2.0;
  OutageModel model(bad);
  auto pair = model.cop_pair(100.0, Sic::perfect, Formulation::exf);
  CHECK(pair.exact == 1.0);
  CHECK_FALSE(pair.feasible);
}

TEST_CASE("printed ALF expression is clamped outside its validity domain") {
  SystemConfig cfg = reference();  // K=2 with R_m > R_n drives it negative
  cfg.rate_m = 0.5;
  cfg.rate_n = 0.1;
  OutageModel model(cfg);
  auto v = model.cop_user_n(10.0, Sic::perfect, Formulation::alf);
  CHECK(v.exact == 0.0);
  CHECK(v.clamped);
  auto asy = model.cop_user_n(10.0, Sic::perfect, Formulation::alf).asymptotic;
  CHECK(asy == 0.0);
  // the EXF value is unaffected
  CHECK_FALSE(model.cop_user_n(10.0, Sic::perfect, Formulation::exf).clamped);
}

TEST_CASE("unified evaluators at K=1 match the single-carrier corollary forms") {
  std::mt19937 gen(777);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int tested = 0;
  for (int i = 0; i < 100; ++i) {
    SystemConfig cfg;
    cfg.num_subcarriers = 1;
    cfg.num_users = 2 + int(unif(gen) * 4);
    cfg.rank_m = 1 + int(unif(gen) * (cfg.num_users - 1));
    cfg.rank_n = cfg.rank_m + 1 +
                 int(unif(gen) * (cfg.num_users - cfg.rank_m - 1 + 0.999));
    cfg.rank_n = std::min(cfg.rank_n, cfg.num_users);
    cfg.a_m = 0.55 + 0.4 * unif(gen);
    cfg.a_n = 1.0 - cfg.a_m;
    cfg.rate_m = std::pow(10.0, -2.0 + 2.3 * unif(gen));
    cfg.rate_n = std::pow(10.0, -2.0 + 2.3 * unif(gen));
    cfg.path_loss_exp = 2.0 + 2.0 * unif(gen);
    cfg.eta = 0.5 + 1.5 * unif(gen);
    cfg.disk_radius = 1.0 + 9.0 * unif(gen);
    cfg.ri_power_total = db_to_linear(-40.0 + 30.0 * unif(gen));
    if (validate(cfg)) continue;
    double rho = db_to_linear(-10.0 + 70.0 * unif(gen));
    OutageModel model(cfg);
    auto table = build_chebyshev_table(cfg.chebyshev_nodes, cfg.disk_radius,
                                       cfg.path_loss_exp);
    auto rule = build_gauss_laguerre(cfg.laguerre_nodes);
    auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
    CHECK_THAT(model.cop_user_m(rho).exact,
               WithinAbs(clamp01(pd_ref::cop_m(cfg, rho, table)), 1e-12));
    CHECK_THAT(model.cop_user_n(rho, Sic::perfect, Formulation::exf).exact,
               WithinAbs(clamp01(pd_ref::cop_n_exf_psic(cfg, rho, table)), 1e-12));
    CHECK_THAT(model.cop_user_n(rho, Sic::imperfect, Formulation::exf).exact,
               WithinAbs(clamp01(pd_ref::cop_n_exf_ipsic(cfg, rho, table, rule)), 1e-12));
    CHECK_THAT(model.cop_user_n(rho, Sic::perfect, Formulation::alf).exact,
               WithinAbs(clamp01(pd_ref::cop_n_alf_psic(cfg, rho, table)), 1e-12));
    CHECK_THAT(model.cop_user_n(rho, Sic::imperfect, Formulation::alf).exact,
               WithinAbs(clamp01(pd_ref::cop_n_alf_ipsic(cfg, rho, table, rule)), 1e-12));
    ++tested;
  }
  CHECK(tested >= 80);
}

TEST_CASE("throughput approaches the rate sum and honors the pairing switch") {
  SystemConfig cfg = reference();
  cfg.rate_m = 1.0;
  cfg.rate_n = 1.0;
  OutageModel model(cfg);
  double rho40 = db_to_linear(40.0);
  CHECK_THAT(model.throughput(rho40, Sic::perfect, Formulation::exf),
             WithinRel(2.0, 0.01));

  // asymmetric rates expose the printed pairing
  cfg.rate_m = 0.2;
  cfg.rate_n = 0.1;
  OutageModel asym(cfg);
  double rho = 10.0;
  double pm = asym.cop_user_m(rho).exact;
  double pn = asym.cop_user_n(rho, Sic::perfect, Formulation::exf).exact;
  CHECK_THAT(asym.throughput(rho, Sic::perfect, Formulation::exf),
             WithinRel((1 - pm) * 0.1 + (1 - pn) * 0.2, 1e-13));
  cfg.throughput_pairing = ThroughputPairing::conventional;
  OutageModel conv(cfg);
  CHECK_THAT(conv.throughput(rho, Sic::perfect, Formulation::exf),
             WithinRel((1 - pm) * 0.2 + (1 - pn) * 0.1, 1e-13));
}

TEST_CASE("throughput vanishes under certain outage") {
  SystemConfig bad = reference();
  bad.a_m = 0.6;
  bad.a_n = 0.4;
  bad.rate_m = 2.0;
  OutageModel model(bad);
  CHECK(model.throughput(100.0, Sic::perfect, Formulation::exf) == 0.0);
}

TEST_CASE("COP values stay in range over randomized configs") {
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    SystemConfig cfg;
    cfg.num_users = 2 + int(unif(gen) * 5);
    cfg.num_subcarriers = 1 + int(unif(gen) * 4);
    cfg.rank_m = 1;
    cfg.rank_n = 2 + int(unif(gen) * (cfg.num_users - 2 + 0.999));
    cfg.rank_n = std::min(cfg.rank_n, cfg.num_users);
    cfg.a_m = 0.55 + 0.4 * unif(gen);
    cfg.a_n = 1.0 - cfg.a_m;
    cfg.rate_m = std::pow(10.0, -2.0 + 2.3 * unif(gen));
    cfg.rate_n = std::pow(10.0, -2.0 + 2.3 * unif(gen));
    cfg.ri_power_total = db_to_linear(-40.0 + 30.0 * unif(gen));
    if (validate(cfg)) continue;
    OutageModel model(cfg);
    for (double snr_db = -10.0; snr_db <= 60.0; snr_db += 10.0) {
      double rho = db_to_linear(snr_db);
      for (EvalMode mode : all_eval_modes()) {
        auto v = model.cop(rho, mode);
        CHECK(v.exact >= 0.0);
        CHECK(v.exact <= 1.0);
        CHECK(v.asymptotic >= 0.0);
        CHECK(v.asymptotic <= 1.0);
      }
    }
  }
}
