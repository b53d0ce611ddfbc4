#ifndef HETNET_SPECIAL_MATH_HPP
#define HETNET_SPECIAL_MATH_HPP

namespace hetnet {

/// Lognormal shadowing S = 10^(X/10), X ~ N(0, sigma_dB^2).
struct LognormalShadow {
  double sigma_dB = 0.0;
};

/// 10^((x-30)/10): dBm to watts.
double dbm_to_watts(double x_dbm);
double watts_to_dbm(double w);

/// Fractional moment E[S^p] = exp((p * sigma_dB * ln10/10)^2 / 2), p >= 0.
double frac_moment_lognormal(const LognormalShadow& shadow, double p);

/// Non-regularized incomplete Beta integral B(x; y, z) = int_0^x t^(y-1)(1-t)^(z-1) dt.
/// Requires 0 <= x <= 1, y > 0, z > 0; relative accuracy ~1e-12.
double incomplete_beta(double x, double y, double z);

/// ln Gamma(y) + ln Gamma(z) - ln Gamma(y+z).
double log_beta(double y, double z);

/// The binomial-sum interference shape factor
///   C(s, t) = (2/alpha) * sum_{n=1..K} C(K,n) [B(1; K-n+2/a, n-2/a) - B(w0; K-n+2/a, n-2/a)]
/// with w0 = (1 + s/(t K))^{-1}. Requires s >= 0, t > 0, K >= 1, alpha > 2.
double c_alpha_k(double s, double t, int K, double alpha);

/// Serving-link path loss density G * delta * t^(delta-1) * exp(-G t^delta).
/// Diverges at t = 0 for delta < 1; callers integrate, never evaluate at exactly 0.
double path_loss_pdf(double G, double delta, double t);

}  // namespace hetnet

#endif
