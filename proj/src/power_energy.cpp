#include "hetnet/power_energy.hpp"

#include <algorithm>
#include <cmath>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {

/// Downlink duty weights per link class: TDD duty fractions, or the FDD band
/// fractions standing in for them in the duty-cycled power terms.
struct Duty {
  double m, s, b;
};

Duty duty(const SystemParams& p) {
  if (p.is_tdd()) {
    const auto& t = p.tdd();
    return {t.tau_m, t.tau_s, t.tau_b};
  }
  const auto& f = p.fdd();
  return {f.xi_D, f.xi_D, f.xi_B};
}

}  // namespace

double scheme_zeta(AllocationScheme scheme, const SystemParams& params) {
  switch (scheme) {
    case AllocationScheme::Proportional:
      return params.K_b * params.K_s / (params.K_m + params.K_b * params.K_s);
    case AllocationScheme::Fixed:
      return 0.5;
    case AllocationScheme::OneTier:
      return 0.0;
    case AllocationScheme::Optimal:
      throw invalid_params("scheme_zeta: Optimal has no closed form; run optimize_zeta");
  }
  throw invalid_params("scheme_zeta: unknown scheme");
}

PowerBreakdown link_powers(const SystemParams& p, const PowerParams& pw,
                           const RateBundle& r) {
  const Duty d = duty(p);
  const double B = p.bandwidth_hz;
  PowerBreakdown out;
  out.P_macro_link = d.m * pw.P_mt + (1.0 - d.m) * p.K_m * pw.P_ut + pw.P_mf +
                     pw.P_ma * p.M_m + pw.P_ua * p.K_m +
                     d.m * p.K_m * (pw.P_me + pw.P_ud) * B * r.R_m_DL +
                     (1.0 - d.m) * p.K_m * (pw.P_md + pw.P_ue) * B * r.R_m_UL;
  out.P_small_link = d.s * pw.P_st + (1.0 - d.s) * p.K_s * pw.P_ut + pw.P_sf +
                     pw.P_sa * p.M_s + pw.P_ua * p.K_s +
                     d.s * p.K_s * (pw.P_se + pw.P_ud) * B * r.R_s_DL +
                     (1.0 - d.s) * p.K_s * (pw.P_sd + pw.P_ue) * B * r.R_s_UL;
  out.P_backhaul_link = d.b * pw.P_mb + (1.0 - d.b) * p.K_b * pw.P_sb +
                        pw.P_ma * p.M_m + p.K_b * p.M_s * pw.P_sa +
                        d.b * p.K_b * p.K_s * (pw.P_me + pw.P_sd) * B * r.R_b_DL +
                        (1.0 - d.b) * p.K_b * p.K_s * (pw.P_md + pw.P_se) * B * r.R_b_UL;
  out.P_area = p.lambda_m * out.P_macro_link + p.lambda_s * out.P_small_link +
               p.lambda_m * out.P_backhaul_link;
  return out;
}

double area_power(const SystemParams& p, const PowerParams& pw, const RateBundle& r) {
  return link_powers(p, pw, r).P_area;
}

EEResult ee_from_base(const SystemParams& params, const PowerParams& powers,
                      const BaseRates& base, double zeta_b) {
  EEResult out;
  out.rates = apply_zeta(base, zeta_b);
  SystemParams p = params;
  p.zeta_b = zeta_b;
  out.area_rate = sum_rate_area(p, powers, out.rates);
  out.area_power = area_power(p, powers, out.rates);
  if (!(out.area_power > 0.0))
    throw degenerate_model("energy efficiency undefined: area power is zero");
  out.eta = out.area_rate / out.area_power;
  return out;
}

EEResult energy_efficiency(const SystemParams& params, const PowerParams& powers,
                           const RateConfig& cfg) {
  return ee_from_base(params, powers, base_rates(params, powers, cfg), params.zeta_b);
}

OptimizeResult optimize_zeta(const SystemParams& params, const PowerParams& powers,
                             int grid_points, double refine_tol, const RateConfig& cfg) {
  if (grid_points < 3) throw invalid_params("optimize_zeta: grid_points must be >= 3");
  if (!(refine_tol > 0.0)) throw invalid_params("optimize_zeta: refine_tol must be > 0");
  const BaseRates base = base_rates(params, powers, cfg);
  auto eta_at = [&](double zeta) { return ee_from_base(params, powers, base, zeta).eta; };

  std::vector<double> zetas(grid_points), etas(grid_points);
  int best = 0;
  for (int i = 0; i < grid_points; ++i) {
    zetas[i] = static_cast<double>(i) / (grid_points - 1);
    etas[i] = eta_at(zetas[i]);
    if (etas[i] > etas[best]) best = i;
  }
  const double emax = *std::max_element(etas.begin(), etas.end());
  const double emin = *std::min_element(etas.begin(), etas.end());
  OptimizeResult out;
  out.flat_objective = emax > 0.0 && (emax - emin) / emax < 1e-6;

  double lo = zetas[std::max(best - 1, 0)];
  double hi = zetas[std::min(best + 1, grid_points - 1)];
  // Golden-section on the bracketing interval around the best grid point.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = eta_at(x1), f2 = eta_at(x2);
  while (hi - lo > refine_tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = eta_at(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = eta_at(x1);
    }
  }
  double zstar = (f1 > f2) ? x1 : x2;
  double fstar = std::max(f1, f2);
  // Never return worse than the best coarse-grid point.
  if (etas[best] > fstar) {
    zstar = zetas[best];
  }
  out.zeta_star = zstar;
  out.best = ee_from_base(params, powers, base, zstar);
  return out;
}

std::vector<SweepRow> sweep(const SystemParams& params, const PowerParams& powers,
                            SweepVariable variable, const std::vector<double>& grid,
                            const RateConfig& cfg) {
  if (grid.empty()) throw invalid_params("sweep: grid must be nonempty");
  std::vector<SweepRow> rows(grid.size());
  // zeta_b sweeps reuse one zeta-free base evaluation for every point.
  std::optional<BaseRates> shared_base;
  if (variable == SweepVariable::ZetaB) shared_base = base_rates(params, powers, cfg);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rows[i].x = grid[i];
    try {
      switch (variable) {
        case SweepVariable::ZetaB:
          rows[i].result = ee_from_base(params, powers, *shared_base, grid[i]);
          break;
        case SweepVariable::PmtCoupled: {
          PowerParams pw = powers;
          pw.P_mt = grid[i];
          pw.P_mb = grid[i];
          rows[i].result = energy_efficiency(params, pw, cfg);
          break;
        }
        case SweepVariable::SapsPerMbs: {
          SystemParams p = params;
          p.K_b = grid[i];
          p.lambda_s = grid[i] * params.lambda_m;
          rows[i].result = energy_efficiency(p, powers, cfg);
          break;
        }
      }
    } catch (const std::exception& e) {
      rows[i].error = e.what();
    }
  }
  return rows;
}

}  // namespace hetnet
