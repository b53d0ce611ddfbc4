#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetnet/errors.hpp"
#include "hetnet/special_math.hpp"

using namespace hetnet;

// Reference values computed with 30-digit arbitrary-precision arithmetic.

TEST_CASE("dbm conversions") {
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(dbm_to_watts(47.8) == doctest::Approx(60.255958607435775).epsilon(1e-14));
  CHECK(dbm_to_watts(23.7) == doctest::Approx(0.23442288153199221).epsilon(1e-14));
  CHECK(watts_to_dbm(dbm_to_watts(17.0)) == doctest::Approx(17.0).epsilon(1e-13));
}

TEST_CASE("lognormal fractional moments") {
  const double delta = 2.0 / 3.8;
  CHECK(frac_moment_lognormal({6.0}, delta) ==
        doctest::Approx(1.3025977901089397).epsilon(1e-14));
  CHECK(frac_moment_lognormal({3.0}, delta) ==
        doctest::Approx(1.0683230142947413).epsilon(1e-14));
  CHECK(frac_moment_lognormal({0.0}, delta) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(frac_moment_lognormal({6.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("incomplete beta reference values") {
  CHECK(incomplete_beta(0.3, 2.5, 1.7) ==
        doctest::Approx(0.016643831172380299).epsilon(1e-12));
  CHECK(incomplete_beta(0.9, 0.4, 3.2) ==
        doctest::Approx(1.4463112519479208).epsilon(1e-12));
  CHECK(incomplete_beta(1.0, 1.3, 0.6) ==
        doctest::Approx(1.3896380596359632).epsilon(1e-12));
  CHECK(incomplete_beta(0.2, 0.05, 4.0) ==
        doctest::Approx(17.977960939605207).epsilon(1e-12));
  // Closed form at integer parameters: B(0.5; 3, 2) = 25/960.
  CHECK(incomplete_beta(0.5, 3.0, 2.0) ==
        doctest::Approx(0.026041666666666667).epsilon(1e-12));
}

TEST_CASE("incomplete beta properties") {
  CHECK(incomplete_beta(0.0, 1.2, 3.4) == 0.0);
  // Monotone nondecreasing in x.
  double prev = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double v = incomplete_beta(i / 20.0, 0.7, 2.3);
    CHECK(v >= prev);
    prev = v;
  }
  // Complete value matches exp(log_beta).
  CHECK(incomplete_beta(1.0, 2.5, 3.5) ==
        doctest::Approx(std::exp(log_beta(2.5, 3.5))).epsilon(1e-12));
  CHECK(log_beta(2.5, 3.5) == doctest::Approx(-3.3018352699620526).epsilon(1e-13));
}

TEST_CASE("incomplete beta domain errors") {
  CHECK_THROWS_AS(incomplete_beta(-0.1, 1.0, 1.0), domain_error);
  CHECK_THROWS_AS(incomplete_beta(1.1, 1.0, 1.0), domain_error);
  CHECK_THROWS_AS(incomplete_beta(0.5, 0.0, 1.0), domain_error);
  CHECK_THROWS_AS(incomplete_beta(0.5, 1.0, -2.0), domain_error);
}

TEST_CASE("interference shape factor reference values") {
  CHECK(c_alpha_k(2.0, 1.5, 4, 3.8) ==
        doctest::Approx(2.1323206436414852).epsilon(1e-11));
  CHECK(c_alpha_k(0.7, 0.3, 1, 4.0) ==
        doctest::Approx(0.99115658643119233).epsilon(1e-11));
  CHECK(c_alpha_k(10.0, 2.0, 25, 3.8) ==
        doctest::Approx(7.7941123271118475).epsilon(1e-11));
  CHECK(c_alpha_k(1.0, 1.0, 1, 3.0) ==
        doctest::Approx(1.6712976965294421).epsilon(1e-11));
}

TEST_CASE("interference shape factor properties") {
  CHECK(c_alpha_k(0.0, 1.0, 3, 3.8) == doctest::Approx(0.0).epsilon(1e-14));
  // Monotone increasing in s at fixed t, K.
  double prev = 0.0;
  for (double s = 0.25; s <= 8.0; s *= 2.0) {
    const double v = c_alpha_k(s, 1.3, 5, 3.8);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(c_alpha_k(1.0, 0.0, 1, 3.8), domain_error);
  CHECK_THROWS_AS(c_alpha_k(-1.0, 1.0, 1, 3.8), domain_error);
  CHECK_THROWS_AS(c_alpha_k(1.0, 1.0, 0, 3.8), domain_error);
  CHECK_THROWS_AS(c_alpha_k(1.0, 1.0, 1, 2.0), domain_error);
}

TEST_CASE("serving path loss density") {
  const double G = 2.5975315729157377e-5;
  const double delta = 2.0 / 3.8;
  // The density integrates to the exact CDF increment on interior intervals.
  auto cdf = [&](double t) { return -std::expm1(-G * std::pow(t, delta)); };
  const double pairs[][2] = {{1e6, 1e8}, {1e8, 1e9}, {1e9, 1e11}};
  for (const auto& [a, b] : pairs) {
    double sum = 0.0;
    const int n = 20000;
    const double dt = (b - a) / n;
    for (int i = 0; i < n; ++i) sum += path_loss_pdf(G, delta, a + (i + 0.5) * dt) * dt;
    CHECK(sum == doctest::Approx(cdf(b) - cdf(a)).epsilon(1e-6));
  }
  CHECK(path_loss_pdf(G, delta, 1.0) > 0.0);
}
