#ifndef HETNET_QUADRATURE_HPP
#define HETNET_QUADRATURE_HPP

#include <functional>

namespace hetnet {

struct QuadConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 200;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

using Integrand = std::function<double(double)>;
using Integrand2 = std::function<double(double, double)>;

/// Adaptive Gauss-Kronrod over (0, inf) via the rational map x = v/(1-v).
/// Throws non_convergence if the error estimate stays above tolerance after
/// max_subdivisions bisections.
QuadResult integrate_semi_infinite(const Integrand& f, const QuadConfig& cfg = {});

/// Independent strategy: adaptive panels [0,1],[1,2],[2,4],... doubled until
/// the panel contribution falls below tolerance. Used to cross-check the
/// transform-based path.
QuadResult integrate_semi_infinite_doubling(const Integrand& f, const QuadConfig& cfg = {});

/// Adaptive quadrature over a finite interval [a, b].
QuadResult integrate_interval(const Integrand& f, double a, double b,
                              const QuadConfig& cfg = {});

/// Iterated integral over (0,inf)^2; outer variable is the first argument.
QuadResult integrate_double(const Integrand2& f, const QuadConfig& cfg_outer,
                            const QuadConfig& cfg_inner);

}  // namespace hetnet

#endif
