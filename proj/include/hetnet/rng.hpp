#ifndef HETNET_RNG_HPP
#define HETNET_RNG_HPP

#include <cmath>
#include <cstdint>

namespace hetnet {

/// splitmix64 step; also used standalone to hash seeds into stream keys.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d4a7a561c7c9e9ULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ with splitmix64 seeding. Distribution samplers are written
/// out explicitly so draws are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  /// Derives an independent stream keyed on (seed, stream ids).
  static Rng stream(std::uint64_t seed, std::uint64_t id1, std::uint64_t id2 = 0) {
    std::uint64_t sm = seed;
    std::uint64_t h = splitmix64(sm) ^ (id1 * 0x9e3779b97f4a7c15ULL);
    h ^= id2 * 0xc2b2ae3d27d4eb4fULL;
    return Rng(h);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on (0, 1); never returns 0 or 1.
  double uniform() {
    const double u = (next_u64() >> 11) * 0x1.0p-53;
    return u == 0.0 ? 0x1.0p-54 : u;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  /// Standard normal via Marsaglia polar; one spare cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, q;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      q = u * u + v * v;
    } while (q >= 1.0 || q == 0.0);
    const double m = std::sqrt(-2.0 * std::log(q) / q);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 boosted by u^(1/shape).
  double gamma(double shape) {
    if (shape < 1.0) return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  /// Poisson: multiplication method below mean 30, else normal approximation
  /// with per-draw rejection correction via the log-pmf.
  long poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {
      const double limit = std::exp(-mean);
      long k = 0;
      double prod = uniform();
      while (prod > limit) {
        prod *= uniform();
        ++k;
      }
      return k;
    }
    // Atkinson's rejection from the logistic envelope.
    const double beta = M_PI / std::sqrt(3.0 * mean);
    const double alpha = beta * mean;
    const double k = std::log(0.767 - 3.36 / mean) - mean - std::log(beta);
    for (;;) {
      const double u = uniform();
      const double x = (alpha - std::log((1.0 - u) / u)) / beta;
      const long n = static_cast<long>(std::floor(x + 0.5));
      if (n < 0) continue;
      const double v = uniform();
      const double y = alpha - beta * x;
      const double t = 1.0 + std::exp(y);
      const double lhs = y + std::log(v / (t * t));
      const double rhs = k + n * std::log(mean) - std::lgamma(n + 1.0);
      if (lhs <= rhs) return n;
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hetnet

#endif
