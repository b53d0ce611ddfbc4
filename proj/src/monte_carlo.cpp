#include "hetnet/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {

constexpr double kLn10Over10 = 0.23025850929940457;

struct Taus {
  double m, s, b;
};

Taus taus(const SystemParams& p) {
  if (p.is_tdd()) {
    const auto& t = p.tdd();
    return {t.tau_m, t.tau_s, t.tau_b};
  }
  return {1.0, 1.0, 1.0};
}

double lognormal_shadow(Rng& rng, double sigma_dB) {
  return std::exp(rng.normal() * sigma_dB * kLn10Over10);
}

double mean_shadow(double sigma_dB) {
  const double s = sigma_dB * kLn10Over10;
  return std::exp(0.5 * s * s);
}

/// Truncation compensation: mean interference from transmitters with full
/// power P beyond radius R, planar density w*lambda, shadow width sigma_dB.
double planar_tail_mean(double w, double lambda, double sigma_dB, double P, double R,
                        double alpha) {
  if (w <= 0.0 || lambda <= 0.0) return 0.0;
  return w * lambda * 2.0 * M_PI * mean_shadow(sigma_dB) * P *
         std::pow(R, 2.0 - alpha) / (alpha - 2.0);
}

/// Propagation losses r^alpha / S of one planar PPP tier inside the disk.
void draw_losses(Rng& rng, double lambda, double R, double sigma_dB, double alpha,
                 std::vector<double>& out) {
  out.clear();
  const long n = rng.poisson(lambda * M_PI * R * R);
  out.reserve(n);
  for (long i = 0; i < n; ++i) {
    const double r = R * std::sqrt(rng.uniform());
    const double S = lognormal_shadow(rng, sigma_dB);
    out.push_back(std::max(std::pow(r, alpha), 1e-30) / S);
  }
}

double gamma_fade(Rng& rng, double K) {
  return K == 1.0 ? rng.exponential(1.0) : rng.gamma(K);
}

}  // namespace

double auto_radius(const SystemParams& params) {
  validate(params);
  const double r0 = 0.5 / std::sqrt(params.lambda_m);
  return r0 * std::pow(0.005 / 1.005, 1.0 / (2.0 - params.alpha));
}

Topology sample_topology(const SystemParams& params, const SimConfig& cfg,
                         long replicate_index) {
  validate(params);
  const double R = cfg.radius_m > 0.0 ? cfg.radius_m : auto_radius(params);
  Topology topo;
  topo.radius_m = R;
  topo.sigma_D_dB = params.shadow_D.sigma_dB;
  topo.sigma_B_dB = params.shadow_B.sigma_dB;
  std::uint64_t sm = cfg.seed;
  topo.pair_key = splitmix64(sm) ^ (0x9e3779b97f4a7c15ULL * (replicate_index + 1));
  const double lambdas[3] = {params.lambda_m, params.lambda_s, params.lambda_u};
  std::vector<StationPoint>* tiers[3] = {&topo.mbs, &topo.sap, &topo.ue};
  for (int tier = 0; tier < 3; ++tier) {
    Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(replicate_index),
                          100 + tier);
    const long n = rng.poisson(lambdas[tier] * M_PI * R * R);
    tiers[tier]->reserve(n);
    for (long i = 0; i < n; ++i) {
      StationPoint pt;
      const double r = R * std::sqrt(rng.uniform());
      const double th = 2.0 * M_PI * rng.uniform();
      pt.x = r * std::cos(th);
      pt.y = r * std::sin(th);
      pt.shadow_D = lognormal_shadow(rng, params.shadow_D.sigma_dB);
      pt.shadow_B = lognormal_shadow(rng, params.shadow_B.sigma_dB);
      tiers[tier]->push_back(pt);
    }
  }
  return topo;
}

Association associate(const Topology& topo, const PowerParams& powers, double alpha) {
  if (topo.mbs.empty()) throw empty_tier("associate: no MBS in topology");
  Association out;
  out.ue_station.resize(topo.ue.size());
  out.ue_on_macro.resize(topo.ue.size());
  out.sap_mbs.resize(topo.sap.size());
  const double sfac = topo.sigma_D_dB * kLn10Over10;
  for (std::size_t j = 0; j < topo.ue.size(); ++j) {
    double best = -1.0;
    int best_idx = 0;
    bool best_macro = true;
    for (int tier = 0; tier < 2; ++tier) {
      const auto& pts = tier == 0 ? topo.mbs : topo.sap;
      const double P = tier == 0 ? powers.P_mt : powers.P_st;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double dx = pts[i].x - topo.ue[j].x;
        const double dy = pts[i].y - topo.ue[j].y;
        const double r = std::max(std::sqrt(dx * dx + dy * dy), 1e-3);
        // Per-pair shadowing, deterministic in (pair_key, ue, tier, station).
        Rng pr = Rng::stream(topo.pair_key, 2 * j + tier, i);
        const double S = std::exp(pr.normal() * sfac);
        const double rx = P * S * std::pow(r, -alpha);
        if (rx > best) {
          best = rx;
          best_idx = static_cast<int>(i);
          best_macro = (tier == 0);
        }
      }
    }
    out.ue_station[j] = best_idx;
    out.ue_on_macro[j] = best_macro;
  }
  for (std::size_t s = 0; s < topo.sap.size(); ++s) {
    double best = std::numeric_limits<double>::infinity();
    int best_idx = 0;
    for (std::size_t i = 0; i < topo.mbs.size(); ++i) {
      const double dx = topo.mbs[i].x - topo.sap[s].x;
      const double dy = topo.mbs[i].y - topo.sap[s].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) {
        best = d2;
        best_idx = static_cast<int>(i);
      }
    }
    out.sap_mbs[s] = best_idx;
  }
  return out;
}

ZfResult zf_precoder(const Eigen::MatrixXcd& Hhat) {
  const Eigen::Index K = Hhat.rows(), M = Hhat.cols();
  if (K < 1 || K > M) throw invalid_params("zf_precoder: need 1 <= K <= M");
  const Eigen::MatrixXcd A = Hhat * Hhat.adjoint();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
  lu.setThreshold(1e-12);
  if (lu.rank() < K) throw rank_deficient("zf_precoder: channel is rank deficient");
  const Eigen::MatrixXcd Ainv = lu.inverse();
  ZfResult out;
  out.W = Hhat.adjoint() * Ainv;
  out.xi2 = 1.0 / Ainv.trace().real();
  return out;
}

BdResult bd_precoder(const std::vector<Eigen::MatrixXcd>& channels, int M_m) {
  if (channels.empty()) throw invalid_params("bd_precoder: no channels");
  const int K_b = static_cast<int>(channels.size());
  const int M_s = static_cast<int>(channels[0].rows());
  for (const auto& H : channels)
    if (H.rows() != M_s || H.cols() != M_m)
      throw invalid_params("bd_precoder: inconsistent channel dimensions");
  if (static_cast<long>(K_b) * M_s > M_m)
    throw invalid_params("bd_precoder: K_b * M_s must be <= M_m");

  // ZF on the full stack supplies the per-block power split.
  Eigen::MatrixXcd stack(K_b * M_s, M_m);
  for (int i = 0; i < K_b; ++i) stack.middleRows(i * M_s, M_s) = channels[i];
  const Eigen::MatrixXcd A = stack * stack.adjoint();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
  lu.setThreshold(1e-12);
  if (lu.rank() < K_b * M_s)
    throw rank_deficient("bd_precoder: stacked channel is rank deficient");
  const Eigen::MatrixXcd Ainv = lu.inverse();
  const double xi2 = 1.0 / Ainv.trace().real();

  BdResult out;
  out.blocks.reserve(K_b);
  out.block_power.reserve(K_b);
  for (int i = 0; i < K_b; ++i) {
    Eigen::MatrixXcd others((K_b - 1) * M_s, M_m);
    int row = 0;
    for (int j = 0; j < K_b; ++j) {
      if (j == i) continue;
      others.middleRows(row, M_s) = channels[j];
      row += M_s;
    }
    Eigen::MatrixXcd V;
    if (others.rows() == 0) {
      V = Eigen::MatrixXcd::Identity(M_m, M_m);
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(others, Eigen::ComputeFullV);
      const Eigen::Index rank = svd.rank();
      V = svd.matrixV().rightCols(M_m - rank);
    }
    if (V.cols() < M_s)
      throw rank_deficient("bd_precoder: null space too small for a block");
    out.blocks.push_back(V);
    double p = 0.0;
    for (int k = 0; k < M_s; ++k) p += xi2 * Ainv(i * M_s + k, i * M_s + k).real();
    out.block_power.push_back(p);
  }
  return out;
}

namespace {

/// Water-filling capacity sum log2(1 + q_j s_j^2) with sum q_j = power.
double waterfill_rate(const Eigen::VectorXd& sv, double power) {
  std::vector<double> gains;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-12) gains.push_back(sv[i] * sv[i]);
  std::sort(gains.begin(), gains.end(), std::greater<>());
  double rate = 0.0;
  for (int active = static_cast<int>(gains.size()); active >= 1; --active) {
    double inv_sum = 0.0;
    for (int j = 0; j < active; ++j) inv_sum += 1.0 / gains[j];
    const double mu = (power + inv_sum) / active;
    if (mu - 1.0 / gains[active - 1] >= 0.0) {
      for (int j = 0; j < active; ++j) rate += std::log2(mu * gains[j]);
      return rate;
    }
  }
  return 0.0;
}

Eigen::MatrixXcd gaussian_matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXcd H(rows, cols);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      H(i, j) = std::complex<double>(rng.normal() * s, rng.normal() * s);
  return H;
}

}  // namespace

PairedBackhaulRates backhaul_zf_bd_sample(int M_m, int M_s, int K_b, double rho,
                                          Rng& rng) {
  if (!(rho > 0.0)) throw invalid_params("backhaul_zf_bd_sample: rho must be > 0");
  std::vector<Eigen::MatrixXcd> channels;
  channels.reserve(K_b);
  for (int i = 0; i < K_b; ++i) channels.push_back(gaussian_matrix(rng, M_s, M_m));

  Eigen::MatrixXcd stack(K_b * M_s, M_m);
  for (int i = 0; i < K_b; ++i) stack.middleRows(i * M_s, M_s) = channels[i];
  const ZfResult zf = zf_precoder(stack);
  PairedBackhaulRates out;
  out.zf = K_b * M_s * std::log2(1.0 + rho * zf.xi2);

  const BdResult bd = bd_precoder(channels, M_m);
  for (int i = 0; i < K_b; ++i) {
    const Eigen::MatrixXcd G = channels[i] * bd.blocks[i];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
    out.bd += waterfill_rate(svd.singularValues(), rho * bd.block_power[i]);
  }
  return out;
}

double fixed_point_residual(const std::vector<double>& losses, int M_m) {
  const int K = static_cast<int>(losses.size());
  if (K < 1 || K >= M_m)
    throw invalid_params("fixed_point_residual: need 1 <= K < M_m");
  const double J = static_cast<double>(K) * M_m / (M_m - K);
  const double rhs = 1.0 + J / M_m;
  double worst = 0.0;
  for (double L : losses) {
    if (!(L > 0.0)) throw invalid_params("fixed_point_residual: losses must be > 0");
    const double e_inv = static_cast<double>(M_m) / (M_m - K) * L;
    const double lhs = (1.0 / L) * e_inv;
    worst = std::max(worst, std::fabs(lhs - rhs) / rhs);
  }
  return worst;
}

namespace {

/// One gamma-fading interferer population in propagation-loss space:
/// intensity weight * a * delta * x^{delta-1} [* (1-e^{-thin_G x^delta})],
/// points below min_loss excluded, per-point power p_over_k * Gamma(k_fade,1).
struct LaplaceComponent {
  double weight = 1.0;
  double a = 0.0;
  double p_over_k = 0.0;
  double k_fade = 1.0;
  double min_loss = 0.0;
  double thin_G = 0.0;  // 0: homogeneous
};

std::vector<LaplaceComponent> laplace_components(LaplaceKind kind,
                                                 std::optional<double> t,
                                                 const SystemParams& p,
                                                 const DerivedModel& m,
                                                 const PowerParams& pw) {
  const Taus tau = taus(p);
  auto need_t = [&]() -> double {
    if (!t || !(*t > 0.0))
      throw invalid_params("empirical_laplace: this kind requires serving loss t > 0");
    return *t;
  };
  const double a_u = m.lambda_u_tilde * M_PI * m.E_SD_delta;
  const double kbms = p.K_b * p.M_s;
  switch (kind) {
    case LaplaceKind::UE_DL:
      return {{1.0, a_u, pw.P_ut, 1.0, 0.0, 0.0}};
    case LaplaceKind::OC_MacroUE: {
      const double tt = need_t();
      return {{tau.m, m.a_m, pw.P_mt / p.K_m, double(p.K_m), tt, 0.0},
              {tau.s, m.a_s, pw.P_st / p.K_s, double(p.K_s), tt * pw.P_st / pw.P_mt, 0.0}};
    }
    case LaplaceKind::OC_SmallUE: {
      const double tt = need_t();
      return {{tau.s, m.a_s, pw.P_st / p.K_s, double(p.K_s), tt, 0.0},
              {tau.m, m.a_m, pw.P_mt / p.K_m, double(p.K_m), tt * pw.P_mt / pw.P_st, 0.0}};
    }
    case LaplaceKind::MBS_UL:
      return {{tau.m, m.a_m, pw.P_mt / p.K_m, double(p.K_m), 0.0, 0.0},
              {tau.s, m.a_s, pw.P_st / p.K_s, double(p.K_s), 0.0, 0.0}};
    case LaplaceKind::UE_UL_Macro:
      return {{1.0, a_u, pw.P_ut, 1.0, 0.0, m.G_m}};
    case LaplaceKind::UE_UL_Small:
      return {{1.0, a_u, pw.P_ut, 1.0, 0.0, m.G_s}};
    case LaplaceKind::BH_SAP_on_DL:
      return {{1.0 - tau.b, p.lambda_s * M_PI * m.E_SB_delta, pw.P_sb / p.M_s,
               double(p.M_s), 0.0, 0.0}};
    case LaplaceKind::BH_MBS_DL:
      return {{tau.b, m.a_b, pw.P_mb / kbms, kbms, need_t(), 0.0}};
    case LaplaceKind::BH_MBS_UL:
      return {{tau.b, m.a_b, pw.P_mb / kbms, kbms, 0.0, 0.0}};
    case LaplaceKind::BH_SAP_UL:
      return {{(1.0 - tau.b) * p.K_b, m.a_b, pw.P_sb / p.M_s, double(p.M_s), 0.0,
               m.a_b}};
  }
  throw invalid_params("empirical_laplace: unknown kind");
}

}  // namespace

double empirical_laplace(LaplaceKind kind, double z, std::optional<double> t,
                         const SystemParams& params, const PowerParams& powers,
                         long samples, std::uint64_t seed) {
  if (!(z > 0.0)) throw invalid_params("empirical_laplace: z must be > 0");
  if (samples < 1) throw invalid_params("empirical_laplace: samples must be >= 1");
  validate(params);
  const DerivedModel m = derive(params, powers);
  const double delta = m.delta;
  auto comps = laplace_components(kind, t, params, m, powers);

  // Per-component truncation window: second-order compensation error
  // z^2 Var_tail / 2 below 1e-6, tail mean folded back deterministically.
  double tail_exponent = 0.0;
  struct Window {
    double u_lo, u_hi;  // in u = x^delta coordinates
    double mean_count;
  };
  std::vector<Window> windows;
  for (auto& c : comps) {
    if (c.weight <= 0.0 || c.a <= 0.0) {
      windows.push_back({0.0, 0.0, 0.0});
      continue;
    }
    const double mean_g2 = c.k_fade * (c.k_fade + 1.0);
    const double var_coef = c.weight * c.a * delta * c.p_over_k * c.p_over_k * mean_g2 /
                            (2.0 - delta);
    // X^{delta-2} = 2e-6 / (z^2 var_coef)
    double X = std::pow(2e-6 / (z * z * var_coef), 1.0 / (delta - 2.0));
    X = std::max(X, 2.0 * std::max(c.min_loss, 1e-300));
    const double mu_tail = c.weight * c.a * delta * c.p_over_k * c.k_fade *
                           std::pow(X, delta - 1.0) / (1.0 - delta);
    tail_exponent += z * mu_tail;
    const double u_lo = std::pow(c.min_loss, delta);
    const double u_hi = std::pow(X, delta);
    windows.push_back({u_lo, u_hi, c.weight * c.a * (u_hi - u_lo)});
  }
  const double tail_factor = std::exp(-tail_exponent);

  double acc = 0.0;
  for (long s = 0; s < samples; ++s) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(s),
                          static_cast<std::uint64_t>(kind));
    double I = 0.0;
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
      const auto& c = comps[ci];
      const auto& w = windows[ci];
      if (w.mean_count <= 0.0) continue;
      const long n = rng.poisson(w.mean_count);
      for (long i = 0; i < n; ++i) {
        const double u = rng.uniform(w.u_lo, w.u_hi);
        if (c.thin_G > 0.0 && !rng.bernoulli(-std::expm1(-c.thin_G * u))) continue;
        const double x = std::pow(u, 1.0 / delta);
        I += c.p_over_k * gamma_fade(rng, c.k_fade) / x;
      }
    }
    acc += std::exp(-z * I);
  }
  return tail_factor * acc / samples;
}

namespace {

struct SimCtx {
  const SystemParams& p;
  const PowerParams& pw;
  DerivedModel m;
  Taus tau;
  double R;
  double alpha;
};

/// Adds gamma-fading interference from one planar station tier; every station
/// with loss below min_loss is skipped (serving-side exclusion already
/// accounts for them).
double tier_interference(Rng& rng, const std::vector<double>& losses, double act,
                         double P, double K, std::size_t skip_index) {
  double I = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (i == skip_index) continue;
    if (!rng.bernoulli(act)) continue;
    I += (P / K) * gamma_fade(rng, K) / losses[i];
  }
  return I;
}

/// Uplink UE interference: planar density lambda, thinned by the serving-link
/// retention 1 - e^{-G x^delta}, Rayleigh power fading.
double ue_interference(Rng& rng, const SimCtx& c, double thin_G) {
  const double lambda = c.m.lambda_u_tilde;
  if (lambda <= 0.0) return 0.0;
  double I = 0.0;
  const long n = rng.poisson(lambda * M_PI * c.R * c.R);
  for (long i = 0; i < n; ++i) {
    const double r = c.R * std::sqrt(rng.uniform());
    const double S = lognormal_shadow(rng, c.p.shadow_D.sigma_dB);
    const double x = std::max(std::pow(r, c.alpha), 1e-30) / S;
    if (thin_G > 0.0 && !rng.bernoulli(-std::expm1(-thin_G * std::pow(x, c.m.delta))))
      continue;
    I += c.pw.P_ut * rng.exponential(1.0) / x;
  }
  return I;
}

struct ServingDraw {
  double t = 0.0;          // serving path loss
  bool ok = false;
};

/// Draws access-tier topologies until the typical UE at the origin associates
/// with the requested tier; returns the serving loss and the interferer
/// losses with the serving station removed from its tier.
ServingDraw draw_dl_serving(Rng& rng, const SimCtx& c, bool want_macro,
                            std::vector<double>& mbs_losses,
                            std::vector<double>& sap_losses) {
  for (int attempt = 0; attempt < 2000; ++attempt) {
    draw_losses(rng, c.p.lambda_m, c.R, c.p.shadow_D.sigma_dB, c.alpha, mbs_losses);
    draw_losses(rng, c.p.lambda_s, c.R, c.p.shadow_D.sigma_dB, c.alpha, sap_losses);
    if (mbs_losses.empty()) continue;
    double best = std::numeric_limits<double>::infinity();
    bool best_macro = true;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < mbs_losses.size(); ++i) {
      const double v = mbs_losses[i] / c.pw.P_mt;
      if (v < best) {
        best = v;
        best_macro = true;
        best_idx = i;
      }
    }
    for (std::size_t i = 0; i < sap_losses.size(); ++i) {
      const double v = sap_losses[i] / c.pw.P_st;
      if (v < best) {
        best = v;
        best_macro = false;
        best_idx = i;
      }
    }
    if (best_macro != want_macro) continue;
    ServingDraw out;
    auto& serving_tier = want_macro ? mbs_losses : sap_losses;
    out.t = serving_tier[best_idx];
    serving_tier.erase(serving_tier.begin() + best_idx);
    out.ok = true;
    return out;
  }
  throw non_convergence("draw_dl_serving: association to requested tier never happened",
                        0.0, 0.0);
}

double sample_loss(Rng& rng, double G, double inv_delta) {
  return std::pow(rng.exponential(1.0) / G, inv_delta);
}

double link_sample(Link link, const SimCtx& c, Rng& rng, ChannelMode mode) {
  const double inv_delta = 1.0 / c.m.delta;
  std::vector<double> mbs, sap;
  double I = 0.0;
  double signal = 0.0;
  switch (link) {
    case Link::MacroDL: {
      auto serving = draw_dl_serving(rng, c, true, mbs, sap);
      I += tier_interference(rng, mbs, c.tau.m, c.pw.P_mt, c.p.K_m, SIZE_MAX);
      I += tier_interference(rng, sap, c.tau.s, c.pw.P_st, c.p.K_s, SIZE_MAX);
      I += ue_interference(rng, c, 0.0);
      I += planar_tail_mean(c.tau.m, c.p.lambda_m, c.p.shadow_D.sigma_dB, c.pw.P_mt,
                            c.R, c.alpha);
      I += planar_tail_mean(c.tau.s, c.p.lambda_s, c.p.shadow_D.sigma_dB, c.pw.P_st,
                            c.R, c.alpha);
      I += planar_tail_mean(1.0, c.m.lambda_u_tilde, c.p.shadow_D.sigma_dB, c.pw.P_ut,
                            c.R, c.alpha);
      if (mode == ChannelMode::FullChannel) {
        // Explicit ZF: co-served UE losses drawn from the serving-loss law.
        Eigen::MatrixXcd Hhat = gaussian_matrix(rng, c.p.K_m, c.p.M_m);
        std::vector<double> losses(c.p.K_m);
        losses[0] = serving.t;
        for (int i = 1; i < c.p.K_m; ++i) losses[i] = sample_loss(rng, c.m.G_m, inv_delta);
        for (int i = 0; i < c.p.K_m; ++i) Hhat.row(i) /= std::sqrt(losses[i]);
        signal = c.pw.P_mt * zf_precoder(Hhat).xi2;
      } else {
        signal = c.m.nu_m_D;
      }
      break;
    }
    case Link::SmallDL: {
      auto serving = draw_dl_serving(rng, c, false, mbs, sap);
      I += tier_interference(rng, sap, c.tau.s, c.pw.P_st, c.p.K_s, SIZE_MAX);
      I += tier_interference(rng, mbs, c.tau.m, c.pw.P_mt, c.p.K_m, SIZE_MAX);
      I += ue_interference(rng, c, 0.0);
      I += planar_tail_mean(c.tau.m, c.p.lambda_m, c.p.shadow_D.sigma_dB, c.pw.P_mt,
                            c.R, c.alpha);
      I += planar_tail_mean(c.tau.s, c.p.lambda_s, c.p.shadow_D.sigma_dB, c.pw.P_st,
                            c.R, c.alpha);
      I += planar_tail_mean(1.0, c.m.lambda_u_tilde, c.p.shadow_D.sigma_dB, c.pw.P_ut,
                            c.R, c.alpha);
      signal = c.pw.P_st * rng.gamma(c.m.Delta_s) / (c.p.K_s * serving.t);
      break;
    }
    case Link::MacroUL:
    case Link::SmallUL: {
      const bool macro = link == Link::MacroUL;
      const double G = macro ? c.m.G_m : c.m.G_s;
      const double t = sample_loss(rng, G, inv_delta);
      draw_losses(rng, c.p.lambda_m, c.R, c.p.shadow_D.sigma_dB, c.alpha, mbs);
      draw_losses(rng, c.p.lambda_s, c.R, c.p.shadow_D.sigma_dB, c.alpha, sap);
      I += tier_interference(rng, mbs, c.tau.m, c.pw.P_mt, c.p.K_m, SIZE_MAX);
      I += tier_interference(rng, sap, c.tau.s, c.pw.P_st, c.p.K_s, SIZE_MAX);
      I += ue_interference(rng, c, G);
      I += planar_tail_mean(c.tau.m, c.p.lambda_m, c.p.shadow_D.sigma_dB, c.pw.P_mt,
                            c.R, c.alpha);
      I += planar_tail_mean(c.tau.s, c.p.lambda_s, c.p.shadow_D.sigma_dB, c.pw.P_st,
                            c.R, c.alpha);
      I += planar_tail_mean(1.0, c.m.lambda_u_tilde, c.p.shadow_D.sigma_dB, c.pw.P_ut,
                            c.R, c.alpha);
      signal = macro ? c.m.nu_m_U / t
                     : c.pw.P_ut * rng.gamma(c.m.Delta_s) / t;
      break;
    }
    case Link::BackhaulDL: {
      const double kbms = c.p.K_b * c.p.M_s;
      for (int attempt = 0;; ++attempt) {
        draw_losses(rng, c.p.lambda_m, c.R, c.p.shadow_B.sigma_dB, c.alpha, mbs);
        if (!mbs.empty()) break;
        if (attempt > 2000) throw empty_tier("BackhaulDL: no MBS drawn");
      }
      const auto it = std::min_element(mbs.begin(), mbs.end());
      const double t = *it;
      mbs.erase(it);
      (void)t;
      I += tier_interference(rng, mbs, c.tau.b, c.pw.P_mb, kbms, SIZE_MAX);
      draw_losses(rng, c.p.lambda_s, c.R, c.p.shadow_B.sigma_dB, c.alpha, sap);
      I += tier_interference(rng, sap, 1.0 - c.tau.b, c.pw.P_sb, double(c.p.M_s),
                             SIZE_MAX);
      I += planar_tail_mean(c.tau.b, c.p.lambda_m, c.p.shadow_B.sigma_dB, c.pw.P_mb,
                            c.R, c.alpha);
      I += planar_tail_mean(1.0 - c.tau.b, c.p.lambda_s, c.p.shadow_B.sigma_dB,
                            c.pw.P_sb, c.R, c.alpha);
      signal = c.m.nu_b_D;
      break;
    }
    case Link::BackhaulUL: {
      const double kbms = c.p.K_b * c.p.M_s;
      const double t = sample_loss(rng, c.m.a_b, inv_delta);
      draw_losses(rng, c.p.lambda_m, c.R, c.p.shadow_B.sigma_dB, c.alpha, mbs);
      I += tier_interference(rng, mbs, c.tau.b, c.pw.P_mb, kbms, SIZE_MAX);
      // Uplink SAP interferers: K_b per MBS, thinned by backhaul association.
      const double lam_sap = c.p.K_b * c.p.lambda_m;
      const long n = rng.poisson((1.0 - c.tau.b) * lam_sap * M_PI * c.R * c.R);
      for (long i = 0; i < n; ++i) {
        const double r = c.R * std::sqrt(rng.uniform());
        const double S = lognormal_shadow(rng, c.p.shadow_B.sigma_dB);
        const double x = std::max(std::pow(r, c.alpha), 1e-30) / S;
        if (!rng.bernoulli(-std::expm1(-c.m.a_b * std::pow(x, c.m.delta)))) continue;
        I += (c.pw.P_sb / c.p.M_s) * rng.gamma(double(c.p.M_s)) / x;
      }
      I += planar_tail_mean(c.tau.b, c.p.lambda_m, c.p.shadow_B.sigma_dB, c.pw.P_mb,
                            c.R, c.alpha);
      I += planar_tail_mean(1.0 - c.tau.b, lam_sap, c.p.shadow_B.sigma_dB, c.pw.P_sb,
                            c.R, c.alpha);
      signal = c.m.nu_b_U / t;
      break;
    }
  }
  return std::log2(1.0 + signal / (I + c.p.sigma2));
}

}  // namespace

RateEstimate estimate_rate(Link link, const SystemParams& params,
                           const PowerParams& powers, const SimConfig& cfg) {
  validate(params);
  if (!params.is_tdd())
    throw invalid_params("estimate_rate: simulation validation runs in TDD mode");
  if (cfg.replicates < 2) throw invalid_params("estimate_rate: need >= 2 replicates");
  if (cfg.mode == ChannelMode::FullChannel && link != Link::MacroDL)
    throw invalid_params("estimate_rate: FullChannel mode covers MacroDL only");
  const SimCtx ctx{params, powers, derive(params, powers), taus(params),
                   cfg.radius_m > 0.0 ? cfg.radius_m : auto_radius(params),
                   params.alpha};
  const bool backhaul = link == Link::BackhaulDL || link == Link::BackhaulUL;
  const double prefactor = backhaul
                               ? params.zeta_b * params.M_s / params.K_s
                               : 1.0 - params.zeta_b;
  double sum = 0.0, sum2 = 0.0;
  for (long rep = 0; rep < cfg.replicates; ++rep) {
    Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(rep),
                          static_cast<std::uint64_t>(link));
    const double v = link_sample(link, ctx, rng, cfg.mode);
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(cfg.replicates);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
  RateEstimate out;
  out.mean = prefactor * mean;
  out.ci95_halfwidth = prefactor * 1.96 * std::sqrt(var / n);
  out.replicates = cfg.replicates;
  return out;
}

}  // namespace hetnet
