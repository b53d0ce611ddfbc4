#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetnet/errors.hpp"
#include "hetnet/quadrature.hpp"

using namespace hetnet;

TEST_CASE("semi-infinite integrals with known values") {
  auto r1 = integrate_semi_infinite([](double x) { return std::exp(-x); });
  CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-10));

  // int_0^inf x e^{-x^2} dx = 1/2
  auto r2 = integrate_semi_infinite([](double x) { return x * std::exp(-x * x); });
  CHECK(r2.value == doctest::Approx(0.5).epsilon(1e-10));

  // int_0^inf 1/(1+x^2) dx = pi/2
  auto r3 = integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x * x); });
  CHECK(r3.value == doctest::Approx(M_PI / 2.0).epsilon(1e-9));

  // Gamma(1.7) via the integral definition.
  auto r4 = integrate_semi_infinite(
      [](double x) { return std::pow(x, 0.7) * std::exp(-x); });
  CHECK(r4.value == doctest::Approx(std::tgamma(1.7)).epsilon(1e-9));
}

TEST_CASE("transform and panel-doubling strategies agree") {
  auto f = [](double x) { return std::log1p(x) * std::exp(-0.3 * x) / (1.0 + x); };
  auto a = integrate_semi_infinite(f);
  auto b = integrate_semi_infinite_doubling(f);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-8));

  auto g = [](double x) { return std::exp(-x) * std::cos(x); };
  CHECK(integrate_semi_infinite(g).value ==
        doctest::Approx(integrate_semi_infinite_doubling(g).value).epsilon(1e-9));
  CHECK(integrate_semi_infinite(g).value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("finite interval integration") {
  auto r = integrate_interval([](double x) { return std::sin(x); }, 0.0, M_PI);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  // Integrable endpoint singularity: int_0^1 x^{-1/2} dx = 2.
  auto s = integrate_interval([](double x) { return 1.0 / std::sqrt(x); }, 1e-14, 1.0);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("iterated double integral") {
  // int int e^{-x-y} dx dy = 1, and a coupled variant with known value:
  // int_0^inf e^{-x} int_0^inf e^{-(1+x)y} dy dx = int e^{-x}/(1+x) = E_1 form.
  auto r = integrate_double(
      [](double x, double y) { return std::exp(-x - y); }, {}, {});
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));

  auto c = integrate_double(
      [](double x, double y) { return std::exp(-x) * std::exp(-(1.0 + x) * y); },
      {}, {});
  // Reference: exp(1)*E_1(1) = 0.59634736232319407 (30-digit arithmetic).
  CHECK(c.value == doctest::Approx(0.59634736232319407).epsilon(1e-8));
}

TEST_CASE("non-convergence is reported") {
  QuadConfig tight{1e-15, 1e-18, 2};
  CHECK_THROWS_AS(integrate_semi_infinite(
                      [](double x) { return std::cos(50.0 * x) * std::exp(-0.01 * x); },
                      tight),
                  non_convergence);
}
