#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetnet/errors.hpp"
#include "hetnet/power_energy.hpp"

using namespace hetnet;

namespace {
SystemParams defaults() { return SystemParams{}; }
PowerParams powers() { return PowerParams{}; }
}  // namespace

TEST_CASE("allocation scheme bandwidth fractions") {
  const SystemParams p = defaults();  // K_m=25, K_s=1, K_b=5
  CHECK(scheme_zeta(AllocationScheme::Proportional, p) ==
        doctest::Approx(5.0 / 30.0).epsilon(1e-15));
  CHECK(scheme_zeta(AllocationScheme::Fixed, p) == 0.5);
  CHECK(scheme_zeta(AllocationScheme::OneTier, p) == 0.0);
  CHECK_THROWS_AS(scheme_zeta(AllocationScheme::Optimal, p), invalid_params);
}

TEST_CASE("link powers: hand-computed value with coding terms off") {
  SystemParams p = defaults();
  PowerParams pw = powers();
  pw.P_me = pw.P_md = pw.P_se = pw.P_sd = pw.P_ue = pw.P_ud = 0.0;
  RateBundle r;  // rates only enter through coding terms
  const PowerBreakdown b = link_powers(p, pw, r);
  // tau_m P_mt + (1-tau_m) K_m P_ut + P_mf + M_m P_ma + K_m P_ua
  const double macro = 0.5 * pw.P_mt + 0.5 * 25 * pw.P_ut + 225.0 + 100 * 1.0 + 25 * 0.1;
  CHECK(b.P_macro_link == doctest::Approx(macro).epsilon(1e-14));
  const double small = 0.5 * pw.P_st + 0.5 * 1 * pw.P_ut + 5.2 + 4 * 0.8 + 1 * 0.1;
  CHECK(b.P_small_link == doctest::Approx(small).epsilon(1e-14));
  const double bh = 0.5 * pw.P_mb + 0.5 * 5 * pw.P_sb + 100 * 1.0 + 5 * 4 * 0.8;
  CHECK(b.P_backhaul_link == doctest::Approx(bh).epsilon(1e-14));
  CHECK(b.P_area ==
        doctest::Approx(p.lambda_m * (macro + bh) + p.lambda_s * small).epsilon(1e-14));
}

TEST_CASE("coding power scales with the bit rate") {
  const SystemParams p = defaults();
  const PowerParams pw = powers();
  RateBundle r;
  r.R_m_DL = 2.0;  // bit/s/Hz
  const double with = link_powers(p, pw, r).P_macro_link;
  const double without = link_powers(p, pw, RateBundle{}).P_macro_link;
  // tau_m K_m (P_me + P_ud) B R = 0.5 * 25 * 2.5e-9 * 20e6 * 2
  CHECK(with - without ==
        doctest::Approx(0.5 * 25 * 2.5e-9 * 20e6 * 2.0).epsilon(1e-12));
}

TEST_CASE("energy efficiency identity and invalid powers") {
  const SystemParams p = defaults();
  const PowerParams pw = powers();
  const EEResult ee = energy_efficiency(p, pw);
  CHECK(ee.eta > 0.0);
  CHECK(ee.area_rate == doctest::Approx(ee.eta * ee.area_power).epsilon(1e-13));

  PowerParams zero = pw;
  zero.P_mt = 0.0;  // association is undefined without transmit power
  BaseRates base;
  CHECK_THROWS_AS(ee_from_base(p, zero, base, 0.5), invalid_params);
}

TEST_CASE("ee_from_base agrees with the direct evaluation") {
  const SystemParams p = defaults();
  const PowerParams pw = powers();
  const BaseRates base = base_rates(p, pw);
  const EEResult a = ee_from_base(p, pw, base, p.zeta_b);
  const EEResult b = energy_efficiency(p, pw);
  CHECK(a.eta == doctest::Approx(b.eta).epsilon(1e-12));
}

TEST_CASE("optimize_zeta finds the grid maximum or better") {
  const SystemParams p = defaults();
  const PowerParams pw = powers();
  const BaseRates base = base_rates(p, pw);
  const OptimizeResult res = optimize_zeta(p, pw, 17, 1e-3);
  CHECK(res.zeta_star >= 0.0);
  CHECK(res.zeta_star <= 1.0);
  for (int i = 0; i < 17; ++i) {
    const double zeta = i / 16.0;
    CHECK(res.best.eta >= ee_from_base(p, pw, base, zeta).eta - 1e-12);
  }
  CHECK_THROWS_AS(optimize_zeta(p, pw, 2, 1e-3), invalid_params);
  CHECK_THROWS_AS(optimize_zeta(p, pw, 17, 0.0), invalid_params);
}

TEST_CASE("zeta sweep reuses one base evaluation consistently") {
  const SystemParams p = defaults();
  const PowerParams pw = powers();
  const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  const auto rows = sweep(p, pw, SweepVariable::ZetaB, grid);
  REQUIRE(rows.size() == grid.size());
  for (const auto& row : rows) {
    REQUIRE(!row.error);
    CHECK(row.result.eta >= 0.0);
  }
  // zeta_b = 0.5 row matches the direct evaluation.
  const EEResult direct = energy_efficiency(p, pw);
  CHECK(rows[2].result.eta == doctest::Approx(direct.eta).epsilon(1e-10));
  CHECK_THROWS_AS(sweep(p, pw, SweepVariable::ZetaB, {}), invalid_params);
}

TEST_CASE("saps-per-mbs sweep couples the small-cell density") {
  const SystemParams p = defaults();
  const PowerParams pw = powers();
  const auto rows = sweep(p, pw, SweepVariable::SapsPerMbs, {1.0, 2.0, 4.0});
  for (const auto& row : rows) {
    REQUIRE(!row.error);
    CHECK(row.result.eta > 0.0);
  }
  // K_b = 4 with lambda_s = 4 lambda_m reproduces a direct evaluation.
  SystemParams q = p;
  q.K_b = 4.0;
  q.lambda_s = 4.0 * p.lambda_m;
  CHECK(rows[2].result.eta ==
        doctest::Approx(energy_efficiency(q, pw).eta).epsilon(1e-10));
}

TEST_CASE("transmit power sweep captures invalid points as row errors") {
  const SystemParams p = defaults();
  const PowerParams pw = powers();
  const auto rows = sweep(p, pw, SweepVariable::PmtCoupled,
                          {dbm_to_watts(40.0), dbm_to_watts(46.0)});
  for (const auto& row : rows) {
    REQUIRE(!row.error);
    CHECK(row.result.eta > 0.0);
  }
}
