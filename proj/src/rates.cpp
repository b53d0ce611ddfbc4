#include "hetnet/rates.hpp"

#include <cmath>
#include <functional>
#include <future>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {

constexpr double kLn2 = 0.6931471805599453;

/// Fraction of stations transmitting downlink (dl_*) and uplink (ul_*) in the
/// band under analysis. TDD: the duty fractions. FDD: every station is active
/// in each band, so all weights are 1.
struct Activity {
  double dl_m, dl_s, dl_b, ul_m, ul_s, ul_b;
};

Activity activity(const SystemParams& p) {
  if (p.is_tdd()) {
    const auto& t = p.tdd();
    return {t.tau_m, t.tau_s, t.tau_b, 1.0 - t.tau_m, 1.0 - t.tau_s, 1.0 - t.tau_b};
  }
  return {1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
}

/// Laplace exponent of gamma-fading interferers from a full (unthinned)
/// propagation process of composite density a: a (zP/K)^delta
/// Gamma(1-delta) Gamma(K+delta) / Gamma(K).
double noexcl(double a, double P, double K, double delta, double z) {
  if (a == 0.0) return 0.0;
  return a * std::pow(z * P / K, delta) *
         std::exp(std::lgamma(1.0 - delta) + std::lgamma(K + delta) - std::lgamma(K));
}

/// 1 - (1+w)^{-M}, stable for small w.
double one_minus_pow(double w, double M) {
  return -std::expm1(-M * std::log1p(w));
}

/// Conditional other-cell exponent given serving path loss t and serving
/// power P_serv: sum over tiers of w_i a_i C_{alpha,K_i}(z P_serv, t)
/// (z P_i / K_i)^delta. The exclusion radius depends on the serving power,
/// hence P_serv in the shape factor's first slot.
double oc_exponent(double z, double t, double P_serv, double w1, double a1, double P1,
                   int K1, double w2, double a2, double P2, int K2,
                   const SystemParams& p, const DerivedModel& m) {
  double e = 0.0;
  if (w1 > 0.0 && a1 > 0.0)
    e += w1 * a1 * c_alpha_k(z * P_serv, t, K1, p.alpha) * std::pow(z * P1 / K1, m.delta);
  if (w2 > 0.0 && a2 > 0.0)
    e += w2 * a2 * c_alpha_k(z * P_serv, t, K2, p.alpha) * std::pow(z * P2 / K2, m.delta);
  return e;
}

/// Exponent of the exclusion-thinned uplink UE interference:
/// lambda_u_tilde pi E[S_D^delta] int (1-e^{-G u}) / (1 + u^{1/delta}/(z P_ut)) du.
/// literal_z replaces the numerator with the constant 1-e^{-G z}.
double ue_ul_exponent(double z, double G, const SystemParams& p, const DerivedModel& m,
                      const PowerParams& pw, const QuadConfig& cfg, bool literal_z) {
  const double dens = m.lambda_u_tilde * M_PI * m.E_SD_delta;
  if (dens == 0.0) return 0.0;
  const double inv_delta = 1.0 / m.delta;
  const double u0 = std::max(std::pow(z * pw.P_ut, m.delta), 1.0 / G);
  const double cnum = literal_z ? -std::expm1(-G * z) : 0.0;
  auto f = [&](double y) {
    const double u = u0 * y;
    const double num = literal_z ? cnum : -std::expm1(-G * u);
    return num / (1.0 + std::pow(u, inv_delta) / (z * pw.P_ut));
  };
  return dens * u0 * integrate_semi_infinite(f, cfg).value;
}

/// Exponent of the exclusion-thinned uplink SAP interference on the backhaul:
/// ul_b K_b a_b int [1 - (1 + zP_sb u^{-1/delta}/M_s)^{-M_s}] (1-e^{-a_b u}) du.
double bh_sap_ul_exponent(double z, const Activity& act, const SystemParams& p,
                          const DerivedModel& m, const PowerParams& pw,
                          const QuadConfig& cfg) {
  if (act.ul_b == 0.0) return 0.0;
  const double c = z * pw.P_sb / p.M_s;
  const double inv_delta = 1.0 / m.delta;
  const double u0 = std::max(std::pow(c, m.delta), 1.0 / m.a_b);
  auto f = [&](double y) {
    const double u = u0 * y;
    const double w = c * std::pow(u, -inv_delta);
    return one_minus_pow(w, p.M_s) * (-std::expm1(-m.a_b * u));
  };
  return act.ul_b * p.K_b * m.a_b * u0 * integrate_semi_infinite(f, cfg).value;
}

int kb_ms(const SystemParams& p) {
  return static_cast<int>(std::llround(p.K_b * p.M_s));
}

double laplace_impl(LaplaceKind kind, double z, std::optional<double> t,
                    const SystemParams& p, const DerivedModel& m, const PowerParams& pw,
                    const QuadConfig& cfg_u) {
  if (!(z > 0.0)) throw invalid_params("interference_laplace: z must be > 0");
  const Activity act = activity(p);
  auto need_t = [&]() -> double {
    if (!t || !(*t > 0.0))
      throw invalid_params("interference_laplace: this kind requires serving loss t > 0");
    return *t;
  };
  switch (kind) {
    case LaplaceKind::UE_DL:
      return std::exp(-noexcl(m.lambda_u_tilde * M_PI * m.E_SD_delta, pw.P_ut, 1.0,
                              m.delta, z));
    case LaplaceKind::OC_MacroUE:
      return std::exp(-oc_exponent(z, need_t(), pw.P_mt, act.dl_m, m.a_m, pw.P_mt, p.K_m,
                                   act.dl_s, m.a_s, pw.P_st, p.K_s, p, m));
    case LaplaceKind::OC_SmallUE:
      return std::exp(-oc_exponent(z, need_t(), pw.P_st, act.dl_s, m.a_s, pw.P_st, p.K_s,
                                   act.dl_m, m.a_m, pw.P_mt, p.K_m, p, m));
    case LaplaceKind::MBS_UL:
      return std::exp(-act.dl_m * noexcl(m.a_m, pw.P_mt, p.K_m, m.delta, z) -
                      act.dl_s * noexcl(m.a_s, pw.P_st, p.K_s, m.delta, z));
    case LaplaceKind::UE_UL_Macro:
      return std::exp(-ue_ul_exponent(z, m.G_m, p, m, pw, cfg_u, false));
    case LaplaceKind::UE_UL_Small:
      return std::exp(-ue_ul_exponent(z, m.G_s, p, m, pw, cfg_u, p.options.small_ul_ue_term_z_arg));
    case LaplaceKind::BH_SAP_on_DL:
      return std::exp(-act.ul_b * noexcl(p.lambda_s * M_PI * m.E_SB_delta, pw.P_sb,
                                         p.M_s, m.delta, z));
    case LaplaceKind::BH_MBS_DL: {
      const double tt = need_t();
      double e = 0.0;
      if (act.dl_b > 0.0)
        e = act.dl_b * m.a_b * c_alpha_k(z * pw.P_mb, tt, kb_ms(p), p.alpha) *
            std::pow(z * pw.P_mb / (p.K_b * p.M_s), m.delta);
      return std::exp(-e);
    }
    case LaplaceKind::BH_MBS_UL:
      return std::exp(-act.dl_b *
                      noexcl(m.a_b, pw.P_mb, p.K_b * p.M_s, m.delta, z));
    case LaplaceKind::BH_SAP_UL:
      return std::exp(-bh_sap_ul_exponent(z, act, p, m, pw, cfg_u));
  }
  throw invalid_params("interference_laplace: unknown kind");
}

/// int_0^infty e^{-sigma2 z} / (z ln2) F(z) dz with the substitution z = z0 y.
double outer_integral(double z0, double sigma2, const std::function<double(double)>& F,
                      const QuadConfig& cfg) {
  auto g = [&](double y) {
    const double z = z0 * y;
    return std::exp(-sigma2 * z) / (y * kLn2) * F(z);
  };
  return integrate_semi_infinite(g, cfg).value;
}

/// E_w[h(t(w))] with t = (w/G)^{1/delta}, w ~ Exp(1): the serving path loss
/// expectation in a well-conditioned variable.
double serving_expectation(double G, double inv_delta,
                           const std::function<double(double)>& h,
                           const QuadConfig& cfg) {
  auto f = [&](double w) {
    const double t = std::pow(w / G, inv_delta);
    return h(t) * std::exp(-w);
  };
  return integrate_semi_infinite(f, cfg).value;
}

double mean_loss(double G, double inv_delta) {
  return std::tgamma(1.0 + inv_delta) * std::pow(G, -inv_delta);
}

struct Ctx {
  const SystemParams& p;
  const PowerParams& pw;
  DerivedModel m;
  Activity act;
  RateConfig cfg;
  double inv_delta;
};

double base_m_dl(const Ctx& c) {
  const double z0 = 1.0 / c.m.nu_m_D;
  const double xi = c.p.is_tdd() ? 1.0 : c.p.fdd().xi_D;
  auto F = [&](double z) {
    const double kernel = -std::expm1(-z * c.m.nu_m_D);
    const double lu = c.p.is_tdd()
                          ? laplace_impl(LaplaceKind::UE_DL, z, {}, c.p, c.m, c.pw,
                                         c.cfg.inner_u)
                          : 1.0;
    auto h = [&](double t) {
      return std::exp(-oc_exponent(z, t, c.pw.P_mt, c.act.dl_m, c.m.a_m, c.pw.P_mt,
                                   c.p.K_m, c.act.dl_s, c.m.a_s, c.pw.P_st, c.p.K_s,
                                   c.p, c.m));
    };
    return kernel * lu * serving_expectation(c.m.G_m, c.inv_delta, h, c.cfg.inner);
  };
  return xi * outer_integral(z0, c.p.sigma2, F, c.cfg.outer);
}

double base_m_ul(const Ctx& c) {
  const bool tdd = c.p.is_tdd();
  const double G_serv = tdd ? c.m.G_m : c.m.G_U;
  const double z0 = mean_loss(G_serv, c.inv_delta) / c.m.nu_m_U;
  const double xi = tdd ? 1.0 : 1.0 - c.p.fdd().xi_D;
  auto F = [&](double z) {
    const double l_oc = tdd ? laplace_impl(LaplaceKind::MBS_UL, z, {}, c.p, c.m, c.pw,
                                           c.cfg.inner_u)
                            : 1.0;
    const double l_ue =
        laplace_impl(LaplaceKind::UE_UL_Macro, z, {}, c.p, c.m, c.pw, c.cfg.inner_u);
    auto h = [&](double t) { return -std::expm1(-z * c.m.nu_m_U / t); };
    return l_oc * l_ue * serving_expectation(G_serv, c.inv_delta, h, c.cfg.inner);
  };
  return xi * outer_integral(z0, c.p.sigma2, F, c.cfg.outer);
}

double base_s_dl(const Ctx& c) {
  const bool tdd = c.p.is_tdd();
  const double z0 = mean_loss(c.m.G_s, c.inv_delta) * c.p.K_s / c.pw.P_st;
  const double xi = tdd ? 1.0 : c.p.fdd().xi_D;
  auto F = [&](double z) {
    const double lu = tdd ? laplace_impl(LaplaceKind::UE_DL, z, {}, c.p, c.m, c.pw,
                                         c.cfg.inner_u)
                          : 1.0;
    auto h = [&](double t) {
      const double kernel = one_minus_pow(z * c.pw.P_st / (t * c.p.K_s),
                                          static_cast<double>(c.m.Delta_s));
      return kernel * std::exp(-oc_exponent(z, t, c.pw.P_st, c.act.dl_s, c.m.a_s,
                                            c.pw.P_st, c.p.K_s, c.act.dl_m, c.m.a_m,
                                            c.pw.P_mt, c.p.K_m, c.p, c.m));
    };
    return lu * serving_expectation(c.m.G_s, c.inv_delta, h, c.cfg.inner);
  };
  return xi * outer_integral(z0, c.p.sigma2, F, c.cfg.outer);
}

double base_s_ul(const Ctx& c) {
  const bool tdd = c.p.is_tdd();
  const double G_serv = tdd ? c.m.G_s : c.m.G_U;
  const double z0 = mean_loss(G_serv, c.inv_delta) / c.pw.P_ut;
  const double xi = tdd ? 1.0 : 1.0 - c.p.fdd().xi_D;
  auto F = [&](double z) {
    const double l_oc = tdd ? laplace_impl(LaplaceKind::MBS_UL, z, {}, c.p, c.m, c.pw,
                                           c.cfg.inner_u)
                            : 1.0;
    const double l_ue =
        laplace_impl(LaplaceKind::UE_UL_Small, z, {}, c.p, c.m, c.pw, c.cfg.inner_u);
    auto h = [&](double t) {
      return one_minus_pow(z * c.pw.P_ut / t, static_cast<double>(c.m.Delta_s));
    };
    return l_oc * l_ue * serving_expectation(G_serv, c.inv_delta, h, c.cfg.inner);
  };
  return xi * outer_integral(z0, c.p.sigma2, F, c.cfg.outer);
}

double base_b_dl(const Ctx& c) {
  const bool tdd = c.p.is_tdd();
  const double z0 = 1.0 / c.m.nu_b_D;
  const double pref = (tdd ? 1.0 : c.p.fdd().xi_B) * c.p.M_s / c.p.K_s;
  auto F = [&](double z) {
    const double kernel = -std::expm1(-z * c.m.nu_b_D);
    const double ls = tdd ? laplace_impl(LaplaceKind::BH_SAP_on_DL, z, {}, c.p, c.m,
                                         c.pw, c.cfg.inner_u)
                          : 1.0;
    auto h = [&](double t) {
      return laplace_impl(LaplaceKind::BH_MBS_DL, z, t, c.p, c.m, c.pw, c.cfg.inner_u);
    };
    return kernel * ls * serving_expectation(c.m.a_b, c.inv_delta, h, c.cfg.inner);
  };
  return pref * outer_integral(z0, c.p.sigma2, F, c.cfg.outer);
}

double base_b_ul(const Ctx& c) {
  const bool tdd = c.p.is_tdd();
  const bool use_flb = tdd || c.p.options.fdd_bh_serving_flb;
  const double G_serv = use_flb ? c.m.a_b : c.m.G_U;
  const double z0 = mean_loss(G_serv, c.inv_delta) / c.m.nu_b_U;
  const double pref = (tdd ? 1.0 : 1.0 - c.p.fdd().xi_B) * c.p.M_s / c.p.K_s;
  auto F = [&](double z) {
    const double l_m = tdd ? laplace_impl(LaplaceKind::BH_MBS_UL, z, {}, c.p, c.m,
                                          c.pw, c.cfg.inner_u)
                           : 1.0;
    const double l_s =
        laplace_impl(LaplaceKind::BH_SAP_UL, z, {}, c.p, c.m, c.pw, c.cfg.inner_u);
    auto h = [&](double t) { return -std::expm1(-z * c.m.nu_b_U / t); };
    return l_m * l_s * serving_expectation(G_serv, c.inv_delta, h, c.cfg.inner);
  };
  return pref * outer_integral(z0, c.p.sigma2, F, c.cfg.outer);
}

}  // namespace

double interference_laplace(LaplaceKind kind, double z, std::optional<double> t,
                            const SystemParams& params, const DerivedModel& model,
                            const PowerParams& powers) {
  return laplace_impl(kind, z, t, params, model, powers, RateConfig{}.inner_u);
}

BaseRates base_rates(const SystemParams& params, const PowerParams& powers,
                     const RateConfig& cfg) {
  const Ctx ctx{params, powers, derive(params, powers), activity(params), cfg,
                params.alpha / 2.0};
  BaseRates out;
  const bool has_small = params.lambda_s > 0.0;
  if (cfg.parallel) {
    auto f1 = std::async(std::launch::async, [&] { return base_m_dl(ctx); });
    auto f2 = std::async(std::launch::async, [&] { return base_m_ul(ctx); });
    std::future<double> f3, f4, f5, f6;
    if (has_small) {
      f3 = std::async(std::launch::async, [&] { return base_s_dl(ctx); });
      f4 = std::async(std::launch::async, [&] { return base_s_ul(ctx); });
      f5 = std::async(std::launch::async, [&] { return base_b_dl(ctx); });
      f6 = std::async(std::launch::async, [&] { return base_b_ul(ctx); });
    }
    out.m_DL = f1.get();
    out.m_UL = f2.get();
    if (has_small) {
      out.s_DL = f3.get();
      out.s_UL = f4.get();
      out.b_DL = f5.get();
      out.b_UL = f6.get();
    }
  } else {
    out.m_DL = base_m_dl(ctx);
    out.m_UL = base_m_ul(ctx);
    if (has_small) {
      out.s_DL = base_s_dl(ctx);
      out.s_UL = base_s_ul(ctx);
      out.b_DL = base_b_dl(ctx);
      out.b_UL = base_b_ul(ctx);
    }
  }
  return out;
}

RateBundle apply_zeta(const BaseRates& base, double zeta_b) {
  if (!(zeta_b >= 0.0 && zeta_b <= 1.0))
    throw invalid_params("apply_zeta: zeta_b must be in [0,1]");
  RateBundle r;
  r.R_m_DL = (1.0 - zeta_b) * base.m_DL;
  r.R_m_UL = (1.0 - zeta_b) * base.m_UL;
  r.R_s_DL = (1.0 - zeta_b) * base.s_DL;
  r.R_s_UL = (1.0 - zeta_b) * base.s_UL;
  r.R_b_DL = zeta_b * base.b_DL;
  r.R_b_UL = zeta_b * base.b_UL;
  return r;
}

RateBundle compute_rates(const SystemParams& params, const PowerParams& powers,
                         const RateConfig& cfg) {
  return apply_zeta(base_rates(params, powers, cfg), params.zeta_b);
}

namespace {

Ctx make_ctx(const SystemParams& p, const PowerParams& pw, const RateConfig& cfg) {
  return Ctx{p, pw, derive(p, pw), activity(p), cfg, p.alpha / 2.0};
}

}  // namespace

double rate_macro_dl(const SystemParams& p, const PowerParams& pw, const RateConfig& cfg) {
  return (1.0 - p.zeta_b) * base_m_dl(make_ctx(p, pw, cfg));
}
double rate_macro_ul(const SystemParams& p, const PowerParams& pw, const RateConfig& cfg) {
  return (1.0 - p.zeta_b) * base_m_ul(make_ctx(p, pw, cfg));
}
double rate_small_dl(const SystemParams& p, const PowerParams& pw, const RateConfig& cfg) {
  return (1.0 - p.zeta_b) * base_s_dl(make_ctx(p, pw, cfg));
}
double rate_small_ul(const SystemParams& p, const PowerParams& pw, const RateConfig& cfg) {
  return (1.0 - p.zeta_b) * base_s_ul(make_ctx(p, pw, cfg));
}
double rate_backhaul_dl(const SystemParams& p, const PowerParams& pw,
                        const RateConfig& cfg) {
  return p.zeta_b * base_b_dl(make_ctx(p, pw, cfg));
}
double rate_backhaul_ul(const SystemParams& p, const PowerParams& pw,
                        const RateConfig& cfg) {
  return p.zeta_b * base_b_ul(make_ctx(p, pw, cfg));
}

double sum_rate_area(const SystemParams& params, const PowerParams& powers,
                     const RateBundle& r) {
  const auto assoc = association_probabilities(params, powers);
  double wm_dl = 1.0, wm_ul = 1.0, ws_dl = 1.0, ws_ul = 1.0;
  if (params.is_tdd()) {
    const auto& t = params.tdd();
    wm_dl = t.tau_m;
    wm_ul = 1.0 - t.tau_m;
    ws_dl = t.tau_s;
    ws_ul = 1.0 - t.tau_s;
  }
  const double per_ue =
      assoc.A_m * (wm_dl * r.R_m_DL + wm_ul * r.R_m_UL) +
      assoc.A_s * (ws_dl * std::min(r.R_s_DL, r.R_b_DL) +
                   ws_ul * std::min(r.R_s_UL, r.R_b_UL));
  return params.bandwidth_hz *
         (params.K_m * params.lambda_m + params.K_s * params.lambda_s) * per_ue;
}

}  // namespace hetnet
