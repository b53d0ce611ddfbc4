#ifndef HETNET_RATES_HPP
#define HETNET_RATES_HPP

#include <optional>

#include "hetnet/network_model.hpp"
#include "hetnet/quadrature.hpp"

namespace hetnet {

/// One entry per closed-form interference Laplace transform.
enum class LaplaceKind {
  UE_DL,          // uplink UEs seen by a downlink receiver, homogeneous density
  OC_MacroUE,     // other-cell DL interference at a macro-served UE (needs t)
  OC_SmallUE,     // other-cell DL interference at a small-cell UE (needs t)
  MBS_UL,         // other-cell DL interference at an MBS receiving uplink
  UE_UL_Macro,    // uplink UEs seen at an MBS, exclusion-thinned intensity
  UE_UL_Small,    // uplink UEs seen at an SAP, exclusion-thinned intensity
  BH_SAP_on_DL,   // uplink SAPs seen by a backhaul DL receiver
  BH_MBS_DL,      // other-MBS backhaul DL interference at an SAP (needs t)
  BH_MBS_UL,      // downlink MBSs seen at an MBS receiving backhaul uplink
  BH_SAP_UL       // uplink SAPs seen at an MBS, exclusion-thinned intensity
};

/// E[e^{-z I}] in (0, 1]. t is the serving-link path loss, required for the
/// conditional kinds OC_MacroUE, OC_SmallUE, BH_MBS_DL and ignored otherwise.
double interference_laplace(LaplaceKind kind, double z, std::optional<double> t,
                            const SystemParams& params, const DerivedModel& model,
                            const PowerParams& powers);

/// Spectral efficiencies in bit/s/Hz with every prefactor included.
struct RateBundle {
  double R_m_DL = 0.0;
  double R_m_UL = 0.0;
  double R_s_DL = 0.0;
  double R_s_UL = 0.0;
  double R_b_DL = 0.0;
  double R_b_UL = 0.0;
};

/// Rates with the backhaul bandwidth split factored out: access entries hold
/// R/(1-zeta_b), backhaul entries hold R/zeta_b. The interference terms do not
/// depend on zeta_b, so one BaseRates evaluation serves a whole zeta_b sweep.
struct BaseRates {
  double m_DL = 0.0, m_UL = 0.0, s_DL = 0.0, s_UL = 0.0, b_DL = 0.0, b_UL = 0.0;
};

struct RateConfig {
  QuadConfig outer{1e-7, 1e-12, 400};
  QuadConfig inner{1e-8, 1e-13, 200};
  QuadConfig inner_u{1e-9, 1e-14, 200};
  bool parallel = true;
};

BaseRates base_rates(const SystemParams& params, const PowerParams& powers,
                     const RateConfig& cfg = {});

RateBundle apply_zeta(const BaseRates& base, double zeta_b);

/// base_rates + apply_zeta at params.zeta_b.
RateBundle compute_rates(const SystemParams& params, const PowerParams& powers,
                         const RateConfig& cfg = {});

/// Individual closed forms (prefactors included, using params.zeta_b).
double rate_macro_dl(const SystemParams&, const PowerParams&, const RateConfig& = {});
double rate_macro_ul(const SystemParams&, const PowerParams&, const RateConfig& = {});
double rate_small_dl(const SystemParams&, const PowerParams&, const RateConfig& = {});
double rate_small_ul(const SystemParams&, const PowerParams&, const RateConfig& = {});
double rate_backhaul_dl(const SystemParams&, const PowerParams&, const RateConfig& = {});
double rate_backhaul_ul(const SystemParams&, const PowerParams&, const RateConfig& = {});

/// Area sum rate in bit/s per m^2; the small-cell terms are bottlenecked by
/// min(access, backhaul) per stream.
double sum_rate_area(const SystemParams& params, const PowerParams& powers,
                     const RateBundle& rates);

}  // namespace hetnet

#endif
