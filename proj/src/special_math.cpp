#include "hetnet/special_math.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "hetnet/errors.hpp"

namespace hetnet {

double dbm_to_watts(double x_dbm) { return std::pow(10.0, (x_dbm - 30.0) / 10.0); }

double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

double frac_moment_lognormal(const LognormalShadow& shadow, double p) {
  if (shadow.sigma_dB < 0.0) throw domain_error("LognormalShadow.sigma_dB must be >= 0");
  if (p < 0.0) throw domain_error("frac_moment_lognormal: exponent p must be >= 0");
  const double s = p * shadow.sigma_dB * std::log(10.0) / 10.0;
  return std::exp(0.5 * s * s);
}

double log_beta(double y, double z) {
  return std::lgamma(y) + std::lgamma(z) - std::lgamma(y + z);
}

namespace {

// Continued fraction for the regularized incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 400;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

// Non-regularized B(x; a, b) for x on the "direct" side of the symmetry split.
double incbeta_direct(double x, double a, double b) {
  // x^a (1-x)^b / a * CF
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x));
  return front * beta_cf(a, b, x) / a;
}

}  // namespace

double incomplete_beta(double x, double y, double z) {
  if (!(x >= 0.0 && x <= 1.0)) throw domain_error("incomplete_beta: x must be in [0,1]");
  if (!(y > 0.0) || !(z > 0.0)) throw domain_error("incomplete_beta: shapes must be > 0");
  if (x == 0.0) return 0.0;
  const double complete = std::exp(log_beta(y, z));
  if (x == 1.0) return complete;
  if (x < (y + 1.0) / (y + z + 2.0)) return incbeta_direct(x, y, z);
  return complete - incbeta_direct(1.0 - x, z, y);
}

namespace {

// Complete-beta part of c_alpha_k depends on (K, alpha) only; cache it.
struct CompleteBetaRow {
  std::vector<double> b1;  // b1[n-1] = B(1; K-n+delta, n-delta), n = 1..K
};

const CompleteBetaRow& complete_beta_row(int K, double alpha) {
  static std::map<std::pair<int, long long>, CompleteBetaRow> cache;
  static std::mutex mu;
  const auto key = std::make_pair(K, static_cast<long long>(alpha * 1e12));
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double delta = 2.0 / alpha;
  CompleteBetaRow row;
  row.b1.resize(K);
  for (int n = 1; n <= K; ++n)
    row.b1[n - 1] = std::exp(log_beta(K - n + delta, n - delta));
  return cache.emplace(key, std::move(row)).first->second;
}

}  // namespace

double c_alpha_k(double s, double t, int K, double alpha) {
  if (!(alpha > 2.0)) throw domain_error("c_alpha_k: alpha must be > 2");
  if (!(s >= 0.0)) throw domain_error("c_alpha_k: s must be >= 0");
  if (!(t > 0.0)) throw domain_error("c_alpha_k: t must be > 0");
  if (K < 1) throw domain_error("c_alpha_k: K must be >= 1");
  if (s == 0.0) return 0.0;
  const double delta = 2.0 / alpha;
  const double w0 = 1.0 / (1.0 + s / (t * K));
  const auto& row = complete_beta_row(K, alpha);
  const double lgK1 = std::lgamma(K + 1.0);
  double sum = 0.0;
  for (int n = 1; n <= K; ++n) {
    const double log_binom = lgK1 - std::lgamma(n + 1.0) - std::lgamma(K - n + 1.0);
    const double diff = row.b1[n - 1] - incomplete_beta(w0, K - n + delta, n - delta);
    sum += std::exp(log_binom) * diff;
  }
  return delta * sum;
}

double path_loss_pdf(double G, double delta, double t) {
  if (!(G > 0.0)) throw domain_error("path_loss_pdf: G must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw domain_error("path_loss_pdf: delta must be in (0,1)");
  if (t < 0.0) throw domain_error("path_loss_pdf: t must be >= 0");
  if (t == 0.0) return std::numeric_limits<double>::infinity();
  const double td = std::pow(t, delta);
  return G * delta * td / t * std::exp(-G * td);
}

}  // namespace hetnet
