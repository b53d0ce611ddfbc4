#ifndef HETNET_POWER_ENERGY_HPP
#define HETNET_POWER_ENERGY_HPP

#include <optional>
#include <string>
#include <vector>

#include "hetnet/rates.hpp"

namespace hetnet {

struct PowerBreakdown {
  double P_macro_link = 0.0;     // W per macro cell
  double P_small_link = 0.0;     // W per small cell
  double P_backhaul_link = 0.0;  // W per backhaul link group (one MBS's K_b SAPs)
  double P_area = 0.0;           // W per m^2
};

struct EEResult {
  double eta = 0.0;        // bit per joule
  double area_rate = 0.0;  // bit/s per m^2
  double area_power = 0.0; // W per m^2
  RateBundle rates;
};

enum class AllocationScheme { Optimal, Proportional, Fixed, OneTier };

/// zeta_b implied by a scheme; Optimal requires running optimize_zeta instead.
double scheme_zeta(AllocationScheme scheme, const SystemParams& params);

/// Per-link powers. Coding terms consume bit rates B x spectral efficiency;
/// the coding energies in PowerParams are stored in W per bit/s.
PowerBreakdown link_powers(const SystemParams& params, const PowerParams& powers,
                           const RateBundle& rates);

double area_power(const SystemParams& params, const PowerParams& powers,
                  const RateBundle& rates);

EEResult energy_efficiency(const SystemParams& params, const PowerParams& powers,
                           const RateConfig& cfg = {});

/// Assembles an EEResult from precomputed zeta-free base rates; this is the
/// cheap inner step of sweeps and the zeta optimizer.
EEResult ee_from_base(const SystemParams& params, const PowerParams& powers,
                      const BaseRates& base, double zeta_b);

struct OptimizeResult {
  double zeta_star = 0.0;
  EEResult best;
  bool flat_objective = false;  // max-min relative spread < 1e-6 over the grid
};

OptimizeResult optimize_zeta(const SystemParams& params, const PowerParams& powers,
                             int grid_points = 33, double refine_tol = 1e-3,
                             const RateConfig& cfg = {});

enum class SweepVariable { ZetaB, PmtCoupled, SapsPerMbs };

struct SweepRow {
  double x = 0.0;
  EEResult result;
  std::optional<std::string> error;  // set when this grid point failed
};

/// PmtCoupled varies P_mt (watts) and keeps P_mb = P_mt. SapsPerMbs varies
/// K_b and sets lambda_s = K_b * lambda_m.
std::vector<SweepRow> sweep(const SystemParams& params, const PowerParams& powers,
                            SweepVariable variable, const std::vector<double>& grid,
                            const RateConfig& cfg = {});

}  // namespace hetnet

#endif
