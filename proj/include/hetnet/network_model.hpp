#ifndef HETNET_NETWORK_MODEL_HPP
#define HETNET_NETWORK_MODEL_HPP

#include <variant>

#include "hetnet/special_math.hpp"

namespace hetnet {

/// Dynamic TDD: per-slot downlink probabilities per link class.
struct TddFractions {
  double tau_m = 0.5;
  double tau_s = 0.5;
  double tau_b = 0.5;
};

/// FDD: band fractions assigned to the downlink on access and backhaul.
struct FddFractions {
  double xi_D = 0.5;
  double xi_B = 0.5;
};

using Duplex = std::variant<TddFractions, FddFractions>;

/// Switches selecting alternate model readings; defaults follow the
/// internally consistent, simulation-validated forms.
struct ModelOptions {
  bool macro_ul_signal_bs_power = false;  // nu_m_U constant uses the MBS transmit power
  bool backhaul_dl_scale_delta_exp = false;  // nu_b_D exponent delta instead of 1/delta
  bool small_ul_ue_term_z_arg = false;    // small-cell UL UE exponent: 1 - e^{-G_s z}
  bool fdd_bh_serving_flb = false;    // FDD backhaul UL serving weight f_Lb instead of f_LU
  bool fdd_ul_all_scheduled = true;   // FDD UL interferer density counts every scheduled UE
};

struct SystemParams {
  // Spatial densities, points per m^2.
  double lambda_m = 5e-6;
  double lambda_s = 25e-6;
  double lambda_u = 500e-6;
  // Antennas and served-entity counts. K_b is real-valued; only K_b*M_s must
  // be integral for the closed forms.
  int M_m = 100;
  int M_s = 4;
  int K_m = 25;
  int K_s = 1;
  double K_b = 5.0;
  double alpha = 3.8;       // path loss exponent
  double sigma2 = 6.33e-13; // noise variance, W
  double bandwidth_hz = 20e6;
  double zeta_b = 0.5;      // backhaul bandwidth fraction
  Duplex duplex = TddFractions{};
  LognormalShadow shadow_D{6.0};
  LognormalShadow shadow_B{3.0};
  ModelOptions options;

  bool is_tdd() const { return std::holds_alternative<TddFractions>(duplex); }
  const TddFractions& tdd() const { return std::get<TddFractions>(duplex); }
  const FddFractions& fdd() const { return std::get<FddFractions>(duplex); }
};

/// Transmit, circuit, fixed, and coding powers. Coding energies are stored in
/// W per bit/s (config accepts W/Gb and converts by 1e-9).
struct PowerParams {
  double P_mt = dbm_to_watts(47.8);
  double P_st = dbm_to_watts(23.7);  // femto deployment
  double P_ut = dbm_to_watts(17.0);
  double P_mb = dbm_to_watts(47.8);
  double P_sb = dbm_to_watts(23.7);
  double P_ma = 1.0;
  double P_sa = 0.8;
  double P_ua = 0.1;
  double P_mf = 225.0;
  double P_sf = 5.2;
  double P_me = 0.1e-9;
  double P_md = 0.8e-9;
  double P_se = 0.2e-9;
  double P_sd = 1.6e-9;
  double P_ue = 0.3e-9;
  double P_ud = 2.4e-9;
};

/// Every derived constant consumed by the rate formulas.
struct DerivedModel {
  double delta;            // 2/alpha
  double beta_m, beta_s, beta_b;
  double E_SD_delta, E_SB_delta;
  double a_m, a_s, a_b;    // composite densities lambda*pi*E[S^delta]
  double G_m, G_s;         // association-weighted scales
  double G_U;              // nearest-station scale (lambda_s+lambda_m)*pi*E[S_D^delta]
  double lambda_u_tilde;   // active UL interferer density
  double A_m, A_s;         // association probabilities
  double nu_m_D, nu_m_U, nu_b_D, nu_b_U;
  int Delta_s;             // M_s - K_s + 1
};

/// Throws invalid_params naming the violated invariant.
void validate(const SystemParams& params);

DerivedModel derive(const SystemParams& params, const PowerParams& powers);

/// Eqs. of the max-received-power association split; A_m + A_s = 1 exactly.
struct AssociationProbabilities {
  double A_m;
  double A_s;
};
AssociationProbabilities association_probabilities(const SystemParams& params,
                                                   const PowerParams& powers);

/// P(N_m = n) for the macro cell-load distribution with mean A_m*lambda_u/lambda_m.
double cell_load_pmf(int n, const SystemParams& params, const PowerParams& powers);

struct UnderloadProbability {
  double exact;  // P(N_m < K)
  double bound;  // closed-form upper bound
};
UnderloadProbability underload_probability(int K, const SystemParams& params,
                                           const PowerParams& powers);

}  // namespace hetnet

#endif
