#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetnet/errors.hpp"
#include "hetnet/network_model.hpp"

using namespace hetnet;

namespace {
SystemParams defaults() { return SystemParams{}; }
PowerParams powers() { return PowerParams{}; }
}  // namespace

TEST_CASE("validate accepts the defaults and rejects bad parameters") {
  CHECK_NOTHROW(validate(defaults()));

  SystemParams p = defaults();
  p.alpha = 2.0;
  CHECK_THROWS_AS(validate(p), invalid_params);

  p = defaults();
  p.K_m = 101;  // more streams than antennas
  CHECK_THROWS_AS(validate(p), invalid_params);

  p = defaults();
  p.K_b = 5.3;  // K_b * M_s must be integral
  CHECK_THROWS_AS(validate(p), invalid_params);

  p = defaults();
  p.K_b = 26.0;  // K_b * M_s exceeds M_m
  CHECK_THROWS_AS(validate(p), invalid_params);

  p = defaults();
  p.zeta_b = 1.5;
  CHECK_THROWS_AS(validate(p), invalid_params);

  p = defaults();
  p.duplex = TddFractions{0.5, -0.1, 0.5};
  CHECK_THROWS_AS(validate(p), invalid_params);

  p = defaults();
  p.lambda_m = 0.0;
  CHECK_THROWS_AS(validate(p), invalid_params);
}

TEST_CASE("derived constants at defaults match independent references") {
  const DerivedModel m = derive(defaults(), powers());
  CHECK(m.delta == doctest::Approx(2.0 / 3.8).epsilon(1e-15));
  CHECK(m.E_SD_delta == doctest::Approx(1.3025977901089397).epsilon(1e-13));
  CHECK(m.E_SB_delta == doctest::Approx(1.0683230142947413).epsilon(1e-13));
  CHECK(m.a_m == doctest::Approx(2.0461158239942722e-5).epsilon(1e-12));
  CHECK(m.a_s == doctest::Approx(1.0230579119971361e-4).epsilon(1e-12));
  CHECK(m.a_b == doctest::Approx(1.6781178666846315e-5).epsilon(1e-12));
  CHECK(m.G_m == doctest::Approx(2.5975315729157377e-5).epsilon(1e-12));
  CHECK(m.G_s == doctest::Approx(4.8192769838938546e-4).epsilon(1e-12));
  CHECK(m.G_U == doctest::Approx(1.2276694943965633e-4).epsilon(1e-12));
  CHECK(m.lambda_u_tilde == doctest::Approx(7.5e-5).epsilon(1e-12));
  CHECK(m.A_m == doctest::Approx(0.78771547777473229).epsilon(1e-12));
  CHECK(m.nu_m_D == doctest::Approx(1.9185092451261151e-7).epsilon(1e-11));
  CHECK(m.nu_m_U == doctest::Approx(3.7589042522045421).epsilon(1e-12));
  CHECK(m.nu_b_D == doctest::Approx(1.1153205975328888e-7).epsilon(1e-11));
  CHECK(m.nu_b_U == doctest::Approx(18.753830522559377).epsilon(1e-12));
  CHECK(m.Delta_s == 4);
  CHECK(m.beta_m == doctest::Approx(0.25));
  CHECK(m.beta_s == doctest::Approx(0.25));
  CHECK(m.beta_b == doctest::Approx(0.2));
}

TEST_CASE("association probabilities") {
  const auto ap = association_probabilities(defaults(), powers());
  CHECK(ap.A_m + ap.A_s == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ap.A_m == doctest::Approx(0.78771547777473229).epsilon(1e-12));

  // Equal powers reduce association to the density split.
  SystemParams p = defaults();
  PowerParams pw = powers();
  pw.P_st = pw.P_mt;
  const auto eq = association_probabilities(p, pw);
  CHECK(eq.A_m == doctest::Approx(p.lambda_m / (p.lambda_m + p.lambda_s)).epsilon(1e-14));

  // A_m increases with macro transmit power.
  pw = powers();
  double prev = 0.0;
  for (double dbm = 40.0; dbm <= 50.0; dbm += 2.0) {
    pw.P_mt = dbm_to_watts(dbm);
    const double am = association_probabilities(p, pw).A_m;
    CHECK(am > prev);
    prev = am;
  }
}

TEST_CASE("cell load pmf normalizes and has the right mean") {
  const SystemParams p = defaults();
  const PowerParams pw = powers();
  const DerivedModel m = derive(p, pw);
  double total = 0.0, mean = 0.0;
  for (int n = 0; n < 4000; ++n) {
    const double v = cell_load_pmf(n, p, pw);
    CHECK(v >= 0.0);
    total += v;
    mean += n * v;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mean == doctest::Approx(m.A_m * p.lambda_u / p.lambda_m).epsilon(1e-8));
}

TEST_CASE("underload probability: exact below bound, monotone in load") {
  const PowerParams pw = powers();
  SystemParams p = defaults();
  const auto u = underload_probability(p.K_m, p, pw);
  CHECK(u.exact >= 0.0);
  CHECK(u.exact <= 1.0);
  CHECK(u.exact <= u.bound);

  // More users per macro cell means less underloading.
  double prev = 1.0;
  for (double lu : {100e-6, 200e-6, 500e-6, 1000e-6}) {
    p.lambda_u = lu;
    const double e = underload_probability(p.K_m, p, pw).exact;
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
}

TEST_CASE("audit switches change only their own constant") {
  SystemParams p = defaults();
  const PowerParams pw = powers();
  const DerivedModel base = derive(p, pw);

  p.options.macro_ul_signal_bs_power = true;
  const DerivedModel l3 = derive(p, pw);
  CHECK(l3.nu_m_U == doctest::Approx((1.0 - base.beta_m) * p.M_m * pw.P_mt).epsilon(1e-13));
  CHECK(l3.nu_m_D == doctest::Approx(base.nu_m_D).epsilon(1e-15));

  p = defaults();
  p.options.backhaul_dl_scale_delta_exp = true;
  const DerivedModel e21 = derive(p, pw);
  CHECK(e21.nu_b_D != doctest::Approx(base.nu_b_D).epsilon(1e-6));
  CHECK(e21.nu_m_D == doctest::Approx(base.nu_m_D).epsilon(1e-15));
}

TEST_CASE("fdd duplex variant") {
  SystemParams p = defaults();
  p.duplex = FddFractions{0.6, 0.4};
  CHECK_NOTHROW(validate(p));
  CHECK(!p.is_tdd());
  const DerivedModel m = derive(p, powers());
  // All scheduled UEs interfere in the FDD uplink band by default.
  CHECK(m.lambda_u_tilde ==
        doctest::Approx(p.lambda_m * p.K_m + p.lambda_s * p.K_s).epsilon(1e-13));

  p.options.fdd_ul_all_scheduled = false;
  const DerivedModel m2 = derive(p, powers());
  CHECK(m2.lambda_u_tilde <= m.lambda_u_tilde);
}
