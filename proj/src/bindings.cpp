#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hetnet/config_io.hpp"
#include "hetnet/monte_carlo.hpp"
#include "hetnet/power_energy.hpp"
#include "hetnet/rates.hpp"

namespace py = pybind11;
using namespace hetnet;

PYBIND11_MODULE(_hetnet, m) {
  m.doc() = "Two-tier cellular network rate, power, and energy-efficiency model";

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("lambda_m", &SystemParams::lambda_m)
      .def_readwrite("lambda_s", &SystemParams::lambda_s)
      .def_readwrite("lambda_u", &SystemParams::lambda_u)
      .def_readwrite("M_m", &SystemParams::M_m)
      .def_readwrite("M_s", &SystemParams::M_s)
      .def_readwrite("K_m", &SystemParams::K_m)
      .def_readwrite("K_s", &SystemParams::K_s)
      .def_readwrite("K_b", &SystemParams::K_b)
      .def_readwrite("alpha", &SystemParams::alpha)
      .def_readwrite("sigma2", &SystemParams::sigma2)
      .def_readwrite("bandwidth_hz", &SystemParams::bandwidth_hz)
      .def_readwrite("zeta_b", &SystemParams::zeta_b)
      .def("set_tdd",
           [](SystemParams& p, double tau_m, double tau_s, double tau_b) {
             p.duplex = TddFractions{tau_m, tau_s, tau_b};
           },
           py::arg("tau_m") = 0.5, py::arg("tau_s") = 0.5, py::arg("tau_b") = 0.5)
      .def("set_fdd",
           [](SystemParams& p, double xi_D, double xi_B) {
             p.duplex = FddFractions{xi_D, xi_B};
           },
           py::arg("xi_D") = 0.5, py::arg("xi_B") = 0.5)
      .def("is_tdd", &SystemParams::is_tdd)
      .def_property(
          "sigma_D_dB",
          [](const SystemParams& p) { return p.shadow_D.sigma_dB; },
          [](SystemParams& p, double v) { p.shadow_D.sigma_dB = v; })
      .def_property(
          "sigma_B_dB",
          [](const SystemParams& p) { return p.shadow_B.sigma_dB; },
          [](SystemParams& p, double v) { p.shadow_B.sigma_dB = v; });

  py::class_<PowerParams>(m, "PowerParams")
      .def(py::init<>())
      .def_readwrite("P_mt", &PowerParams::P_mt)
      .def_readwrite("P_st", &PowerParams::P_st)
      .def_readwrite("P_ut", &PowerParams::P_ut)
      .def_readwrite("P_mb", &PowerParams::P_mb)
      .def_readwrite("P_sb", &PowerParams::P_sb)
      .def_readwrite("P_ma", &PowerParams::P_ma)
      .def_readwrite("P_sa", &PowerParams::P_sa)
      .def_readwrite("P_ua", &PowerParams::P_ua)
      .def_readwrite("P_mf", &PowerParams::P_mf)
      .def_readwrite("P_sf", &PowerParams::P_sf)
      .def_readwrite("P_me", &PowerParams::P_me)
      .def_readwrite("P_md", &PowerParams::P_md)
      .def_readwrite("P_se", &PowerParams::P_se)
      .def_readwrite("P_sd", &PowerParams::P_sd)
      .def_readwrite("P_ue", &PowerParams::P_ue)
      .def_readwrite("P_ud", &PowerParams::P_ud);

  py::class_<RateBundle>(m, "RateBundle")
      .def_readonly("R_m_DL", &RateBundle::R_m_DL)
      .def_readonly("R_m_UL", &RateBundle::R_m_UL)
      .def_readonly("R_s_DL", &RateBundle::R_s_DL)
      .def_readonly("R_s_UL", &RateBundle::R_s_UL)
      .def_readonly("R_b_DL", &RateBundle::R_b_DL)
      .def_readonly("R_b_UL", &RateBundle::R_b_UL);

  py::class_<EEResult>(m, "EEResult")
      .def_readonly("eta", &EEResult::eta)
      .def_readonly("area_rate", &EEResult::area_rate)
      .def_readonly("area_power", &EEResult::area_power)
      .def_readonly("rates", &EEResult::rates);

  py::class_<OptimizeResult>(m, "OptimizeResult")
      .def_readonly("zeta_star", &OptimizeResult::zeta_star)
      .def_readonly("best", &OptimizeResult::best)
      .def_readonly("flat_objective", &OptimizeResult::flat_objective);

  py::enum_<LaplaceKind>(m, "LaplaceKind")
      .value("UE_DL", LaplaceKind::UE_DL)
      .value("OC_MacroUE", LaplaceKind::OC_MacroUE)
      .value("OC_SmallUE", LaplaceKind::OC_SmallUE)
      .value("MBS_UL", LaplaceKind::MBS_UL)
      .value("UE_UL_Macro", LaplaceKind::UE_UL_Macro)
      .value("UE_UL_Small", LaplaceKind::UE_UL_Small)
      .value("BH_SAP_on_DL", LaplaceKind::BH_SAP_on_DL)
      .value("BH_MBS_DL", LaplaceKind::BH_MBS_DL)
      .value("BH_MBS_UL", LaplaceKind::BH_MBS_UL)
      .value("BH_SAP_UL", LaplaceKind::BH_SAP_UL);

  py::enum_<Link>(m, "Link")
      .value("MacroDL", Link::MacroDL)
      .value("MacroUL", Link::MacroUL)
      .value("SmallDL", Link::SmallDL)
      .value("SmallUL", Link::SmallUL)
      .value("BackhaulDL", Link::BackhaulDL)
      .value("BackhaulUL", Link::BackhaulUL);

  m.def("default_config", [] {
    ParsedConfig cfg = default_config();
    return py::make_tuple(cfg.system, cfg.power);
  });
  m.def("dbm_to_watts", &dbm_to_watts);
  m.def("incomplete_beta", &incomplete_beta);
  m.def("c_alpha_k", &c_alpha_k);

  m.def("derive_constants", [](const SystemParams& p, const PowerParams& pw) {
    validate(p);
    const DerivedModel d = derive(p, pw);
    py::dict out;
    out["delta"] = d.delta;
    out["a_m"] = d.a_m;
    out["a_s"] = d.a_s;
    out["a_b"] = d.a_b;
    out["G_m"] = d.G_m;
    out["G_s"] = d.G_s;
    out["G_U"] = d.G_U;
    out["lambda_u_tilde"] = d.lambda_u_tilde;
    out["A_m"] = d.A_m;
    out["A_s"] = d.A_s;
    out["nu_m_D"] = d.nu_m_D;
    out["nu_m_U"] = d.nu_m_U;
    out["nu_b_D"] = d.nu_b_D;
    out["nu_b_U"] = d.nu_b_U;
    out["Delta_s"] = d.Delta_s;
    return out;
  });

  m.def("interference_laplace",
        [](LaplaceKind kind, double z, std::optional<double> t,
           const SystemParams& p, const PowerParams& pw) {
          validate(p);
          return interference_laplace(kind, z, t, p, derive(p, pw), pw);
        },
        py::arg("kind"), py::arg("z"), py::arg("t"), py::arg("params"),
        py::arg("powers"));

  m.def("compute_rates", [](const SystemParams& p, const PowerParams& pw) {
    validate(p);
    return compute_rates(p, pw);
  });

  m.def("energy_efficiency", [](const SystemParams& p, const PowerParams& pw) {
    validate(p);
    return energy_efficiency(p, pw);
  });

  m.def("optimize_zeta",
        [](const SystemParams& p, const PowerParams& pw, int grid_points,
           double tol) {
          validate(p);
          return optimize_zeta(p, pw, grid_points, tol);
        },
        py::arg("params"), py::arg("powers"), py::arg("grid_points") = 33,
        py::arg("tol") = 1e-3);

  m.def("cell_load_pmf", [](int n, const SystemParams& p, const PowerParams& pw) {
    validate(p);
    return cell_load_pmf(n, p, pw);
  });

  m.def("estimate_rate",
        [](Link link, const SystemParams& p, const PowerParams& pw,
           long replicates, std::uint64_t seed) {
          validate(p);
          SimConfig cfg;
          cfg.replicates = replicates;
          cfg.seed = seed;
          const RateEstimate est = estimate_rate(link, p, pw, cfg);
          py::dict out;
          out["mean"] = est.mean;
          out["ci95_halfwidth"] = est.ci95_halfwidth;
          out["replicates"] = est.replicates;
          return out;
        },
        py::arg("link"), py::arg("params"), py::arg("powers"),
        py::arg("replicates") = 2000, py::arg("seed") = 1);
}
