#ifndef HETNET_MONTE_CARLO_HPP
#define HETNET_MONTE_CARLO_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hetnet/rates.hpp"
#include "hetnet/rng.hpp"

namespace hetnet {

enum class ChannelMode { GammaEffective, FullChannel };

enum class Link { MacroDL, MacroUL, SmallDL, SmallUL, BackhaulDL, BackhaulUL };

struct SimConfig {
  double radius_m = 0.0;  // 0: derive from auto_radius
  long replicates = 2000;
  std::uint64_t seed = 1;
  ChannelMode mode = ChannelMode::GammaEffective;
};

struct StationPoint {
  double x = 0.0, y = 0.0;
  double shadow_D = 1.0;  // access-band shadowing toward the origin
  double shadow_B = 1.0;  // backhaul-band shadowing toward the origin
};

struct Topology {
  std::vector<StationPoint> mbs, sap, ue;
  double radius_m = 0.0;
  double sigma_D_dB = 0.0, sigma_B_dB = 0.0;
  // Key for the deterministic per-(station, UE) shadowing draws used by
  // associate(); derived from (cfg.seed, replicate_index).
  std::uint64_t pair_key = 0;
};

struct Association {
  std::vector<int> ue_station;    // station index within its tier
  std::vector<bool> ue_on_macro;  // tier of the serving station
  std::vector<int> sap_mbs;       // nearest MBS per SAP
};

struct RateEstimate {
  double mean = 0.0;            // bit/s/Hz, prefactors included
  double ci95_halfwidth = 0.0;  // normal-approximation 95% CI
  long replicates = 0;
};

/// Disk radius such that mean interference from beyond it stays below 0.5%
/// of the in-disk mean for the sparsest tier.
double auto_radius(const SystemParams& params);

/// Deterministic in (cfg.seed, replicate_index); counts are Poisson, points
/// uniform on the disk, shadowing lognormal per band.
Topology sample_topology(const SystemParams& params, const SimConfig& cfg,
                         long replicate_index);

/// UEs attach to the station maximizing P_t S r^{-alpha}; SAPs to the nearest
/// MBS. Throws empty_tier if a required tier has no station.
Association associate(const Topology& topology, const PowerParams& powers,
                      double alpha);

struct ZfResult {
  Eigen::MatrixXcd W;  // M x K pseudo-inverse columns, Hhat * W = I
  double xi2 = 0.0;    // squared power normalization, 1 / tr[(Hhat Hhat*)^{-1}]
};

/// Hhat is K x M (rows = per-stream effective channels), K <= M.
ZfResult zf_precoder(const Eigen::MatrixXcd& Hhat);

struct BdResult {
  std::vector<Eigen::MatrixXcd> blocks;   // per-SAP precoding basis columns
  std::vector<double> block_power;        // ZF-convention power split
};

/// Block-diagonalizing precoder for K_b stacked M_s x M_m channels.
BdResult bd_precoder(const std::vector<Eigen::MatrixXcd>& channels, int M_m);

struct PairedBackhaulRates {
  double zf = 0.0;
  double bd = 0.0;  // >= zf on every draw
};

/// One paired ZF/BD draw on the same channel realization, unit path losses,
/// per-draw SNR rho. Used for the precoder-comparison protocol.
PairedBackhaulRates backhaul_zf_bd_sample(int M_m, int M_s, int K_b, double rho,
                                          Rng& rng);

/// Max residual of the uplink large-system fixed point when the closed-form
/// solution 1/e_i = M/(M-K) * L_i is substituted back in.
double fixed_point_residual(const std::vector<double>& losses, int M_m);

/// Empirical E[e^{-zI}] from propagation-space sampling with far-tail mean
/// compensation; matches the interference model behind interference_laplace.
double empirical_laplace(LaplaceKind kind, double z, std::optional<double> t,
                         const SystemParams& params, const PowerParams& powers,
                         long samples, std::uint64_t seed);

/// Per-link ergodic spectral efficiency estimate. GammaEffective draws the
/// interference fading in closed form; FullChannel (MacroDL only) builds the
/// ZF precoder explicitly. TDD only.
RateEstimate estimate_rate(Link link, const SystemParams& params,
                           const PowerParams& powers, const SimConfig& cfg);

}  // namespace hetnet

#endif
