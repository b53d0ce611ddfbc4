#ifndef HETNET_ERRORS_HPP
#define HETNET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hetnet {

/// Parameter set violates a documented invariant; message names the invariant.
class invalid_params : public std::invalid_argument {
 public:
  explicit invalid_params(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument outside the documented domain of a special function.
class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

/// Adaptive quadrature failed to reach tolerance within the subdivision budget.
class non_convergence : public std::runtime_error {
 public:
  non_convergence(const std::string& where, double estimate, double tolerance)
      : std::runtime_error("quadrature did not converge in " + where +
                           " (error estimate " + std::to_string(estimate) +
                           " > tolerance " + std::to_string(tolerance) + ")"),
        where_(where), estimate_(estimate), tolerance_(tolerance) {}
  const std::string& where() const { return where_; }
  double estimate() const { return estimate_; }
  double tolerance() const { return tolerance_; }

 private:
  std::string where_;
  double estimate_;
  double tolerance_;
};

/// All power terms vanished; energy efficiency is undefined.
class degenerate_model : public std::runtime_error {
 public:
  explicit degenerate_model(const std::string& what) : std::runtime_error(what) {}
};

/// A required station tier is empty in a sampled topology.
class empty_tier : public std::runtime_error {
 public:
  explicit empty_tier(const std::string& what) : std::runtime_error(what) {}
};

/// Sampled channel matrix is (numerically) rank deficient; caller should resample.
class rank_deficient : public std::runtime_error {
 public:
  explicit rank_deficient(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hetnet

#endif
