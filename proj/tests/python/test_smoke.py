import math
import os
import sys

import pytest

MODULE_DIR = os.environ.get("HETNET_MODULE_DIR")
if MODULE_DIR:
    sys.path.insert(0, MODULE_DIR)

hetnet = pytest.importorskip("_hetnet") if MODULE_DIR else pytest.importorskip("hetnet_ee")


def make_params():
    system, power = hetnet.default_config()
    return system, power


def test_derive_constants():
    system, power = make_params()
    d = hetnet.derive_constants(system, power)
    assert d["delta"] == pytest.approx(2.0 / system.alpha)
    assert d["A_m"] + d["A_s"] == pytest.approx(1.0, abs=1e-12)
    assert 0.0 < d["A_m"] < 1.0
    assert d["G_m"] > 0 and d["G_s"] > 0 and d["a_b"] > 0


def test_laplace_bounds():
    system, power = make_params()
    for z in (1e-3, 1.0, 1e3):
        v = hetnet.interference_laplace(hetnet.LaplaceKind.UE_DL, z, None, system, power)
        assert 0.0 < v <= 1.0
    small = hetnet.interference_laplace(hetnet.LaplaceKind.UE_DL, 1e-12, None, system, power)
    assert small == pytest.approx(1.0, abs=1e-6)


def test_rates_and_ee():
    system, power = make_params()
    rates = hetnet.compute_rates(system, power)
    for r in (rates.R_m_DL, rates.R_m_UL, rates.R_s_DL,
              rates.R_s_UL, rates.R_b_DL, rates.R_b_UL):
        assert math.isfinite(r) and r > 0.0
    ee = hetnet.energy_efficiency(system, power)
    assert ee.eta > 0.0
    assert ee.area_rate == pytest.approx(ee.eta * ee.area_power, rel=1e-12)


def test_cell_load_pmf_normalizes():
    system, power = make_params()
    total = sum(hetnet.cell_load_pmf(n, system, power) for n in range(2000))
    assert total == pytest.approx(1.0, abs=1e-9)


def test_mc_estimate_runs():
    system, power = make_params()
    est = hetnet.estimate_rate(hetnet.Link.MacroDL, system, power,
                               replicates=50, seed=7)
    assert est["replicates"] == 50
    assert est["mean"] > 0.0
    again = hetnet.estimate_rate(hetnet.Link.MacroDL, system, power,
                                 replicates=50, seed=7)
    assert again["mean"] == est["mean"]
