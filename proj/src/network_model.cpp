#include "hetnet/network_model.hpp"

#include <cmath>
#include <string>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {

void check(bool ok, const char* msg) {
  if (!ok) throw invalid_params(msg);
}

bool frac_ok(double f) { return f >= 0.0 && f <= 1.0; }

}  // namespace

void validate(const SystemParams& p) {
  check(p.lambda_m > 0.0, "lambda_m must be > 0");
  check(p.lambda_s >= 0.0, "lambda_s must be >= 0");
  check(p.lambda_u > 0.0, "lambda_u must be > 0");
  check(p.M_m >= 1 && p.M_s >= 1, "antenna counts must be >= 1");
  check(p.K_m >= 1 && p.K_m <= p.M_m, "K_m must satisfy 1 <= K_m <= M_m");
  check(p.K_s >= 1 && p.K_s <= p.M_s, "K_s must satisfy 1 <= K_s <= M_s");
  check(p.K_b > 0.0, "K_b must be > 0");
  const double kbms = p.K_b * p.M_s;
  check(std::fabs(kbms - std::round(kbms)) < 1e-9, "K_b * M_s must be an integer");
  check(kbms <= p.M_m + 1e-9, "K_b * M_s must be <= M_m");
  check(p.alpha > 2.0, "alpha must be > 2");
  check(p.sigma2 > 0.0, "sigma2 must be > 0");
  check(p.bandwidth_hz > 0.0, "bandwidth_hz must be > 0");
  check(frac_ok(p.zeta_b), "zeta_b must be in [0,1]");
  check(p.shadow_D.sigma_dB >= 0.0 && p.shadow_B.sigma_dB >= 0.0,
        "shadow sigma_dB must be >= 0");
  if (p.is_tdd()) {
    const auto& d = p.tdd();
    check(frac_ok(d.tau_m) && frac_ok(d.tau_s) && frac_ok(d.tau_b),
          "TDD downlink fractions must be in [0,1]");
  } else {
    const auto& d = p.fdd();
    check(frac_ok(d.xi_D) && frac_ok(d.xi_B), "FDD band fractions must be in [0,1]");
  }
}

AssociationProbabilities association_probabilities(const SystemParams& p,
                                                   const PowerParams& pw) {
  validate(p);
  check(pw.P_mt > 0.0 && pw.P_st > 0.0, "transmit powers must be > 0");
  const double delta = 2.0 / p.alpha;
  const double wm = p.lambda_m * std::pow(pw.P_mt, delta);
  const double ws = p.lambda_s * std::pow(pw.P_st, delta);
  const double A_m = wm / (wm + ws);
  return {A_m, 1.0 - A_m};
}

DerivedModel derive(const SystemParams& p, const PowerParams& pw) {
  validate(p);
  check(pw.P_mt > 0.0 && pw.P_st > 0.0 && pw.P_ut > 0.0 && pw.P_mb > 0.0 && pw.P_sb > 0.0,
        "transmit powers must be > 0");
  DerivedModel d{};
  d.delta = 2.0 / p.alpha;
  d.beta_m = static_cast<double>(p.K_m) / p.M_m;
  d.beta_s = static_cast<double>(p.K_s) / p.M_s;
  d.beta_b = p.K_b * p.M_s / p.M_m;
  d.E_SD_delta = frac_moment_lognormal(p.shadow_D, d.delta);
  d.E_SB_delta = frac_moment_lognormal(p.shadow_B, d.delta);
  d.a_m = p.lambda_m * M_PI * d.E_SD_delta;
  d.a_s = p.lambda_s * M_PI * d.E_SD_delta;
  d.a_b = p.lambda_m * M_PI * d.E_SB_delta;
  d.G_m = d.a_m + d.a_s * std::pow(pw.P_st / pw.P_mt, d.delta);
  d.G_s = d.a_s + d.a_m * std::pow(pw.P_mt / pw.P_st, d.delta);
  d.G_U = (p.lambda_m + p.lambda_s) * M_PI * d.E_SD_delta;
  if (p.is_tdd()) {
    const auto& t = p.tdd();
    d.lambda_u_tilde = (1.0 - t.tau_m) * p.lambda_m * p.K_m +
                       (1.0 - t.tau_s) * p.lambda_s * p.K_s;
  } else {
    d.lambda_u_tilde = p.options.fdd_ul_all_scheduled
                           ? p.lambda_m * p.K_m + p.lambda_s * p.K_s
                           : 0.5 * (p.lambda_m * p.K_m + p.lambda_s * p.K_s);
  }
  const auto assoc = association_probabilities(p, pw);
  d.A_m = assoc.A_m;
  d.A_s = assoc.A_s;
  const double g1d = std::tgamma(1.0 + 1.0 / d.delta);
  d.nu_m_D = pw.P_mt * (1.0 - d.beta_m) * std::pow(d.G_m, 1.0 / d.delta) / (d.beta_m * g1d);
  d.nu_m_U = (1.0 - d.beta_m) * p.M_m *
             (p.options.macro_ul_signal_bs_power ? pw.P_mt : pw.P_ut);
  d.nu_b_D = pw.P_mb * (1.0 - d.beta_b) *
             std::pow(d.a_b, p.options.backhaul_dl_scale_delta_exp ? d.delta : 1.0 / d.delta) /
             (d.beta_b * g1d);
  d.nu_b_U = (1.0 - d.beta_b) * p.M_m * pw.P_sb;
  d.Delta_s = p.M_s - p.K_s + 1;
  return d;
}

double cell_load_pmf(int n, const SystemParams& p, const PowerParams& pw) {
  if (n < 0) throw invalid_params("cell_load_pmf: n must be >= 0");
  const auto assoc = association_probabilities(p, pw);
  const double mu = assoc.A_m * p.lambda_u / p.lambda_m;
  constexpr double q = 3.5;
  // log-space evaluation; mean of the pmf is mu, and it sums to 1.
  const double logp = q * std::log(q) + std::lgamma(n + q) - std::lgamma(q) -
                      std::lgamma(n + 1.0) + n * std::log(mu) -
                      (n + q) * std::log(mu + q);
  return std::exp(logp);
}

UnderloadProbability underload_probability(int K, const SystemParams& p,
                                           const PowerParams& pw) {
  if (K < 1) throw invalid_params("underload_probability: K must be >= 1");
  UnderloadProbability out{0.0, 0.0};
  for (int n = 0; n < K; ++n) out.exact += cell_load_pmf(n, p, pw);
  if (out.exact > 1.0) out.exact = 1.0;
  // Loose envelope bound: (2 lambda_m / lambda_u)^q times the truncated
  // Gamma series; useful only as a sanity ceiling for lambda_u >> lambda_m.
  constexpr double q = 3.5;
  double series = 0.0;
  for (int n = 0; n < K; ++n)
    series += std::exp(std::lgamma(n + q) - std::lgamma(q) - std::lgamma(n + 1.0));
  out.bound = std::pow(2.0 * p.lambda_m / p.lambda_u, q) * std::pow(q, q) * series;
  if (out.bound > 1.0) out.bound = 1.0;
  return out;
}

}  // namespace hetnet
