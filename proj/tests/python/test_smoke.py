import json
import math

import numpy as np
import pytest

import ifdsim


def test_ideal_n1_closed_form():
    for theta in np.linspace(0.0, 4 * math.pi, 37):
        p0, p1, p2 = ifdsim.run_coherent([theta])
        assert p0 == pytest.approx(math.sin(theta / 4) ** 4, abs=1e-10)
        assert p1 == pytest.approx(math.cos(theta / 4) ** 4, abs=1e-10)
        assert p2 == pytest.approx(0.5 * math.sin(theta / 2) ** 2, abs=1e-10)


def test_ideal_n2_values():
    p = ifdsim.run_coherent([math.pi, math.pi])
    assert p[0] == pytest.approx((31 + 12 * math.sqrt(3)) / 64, abs=1e-12)
    assert ifdsim.efficiency(p[0], p[2]) == pytest.approx(0.8118, abs=5e-4)
    pr, nr = ifdsim.pr_nr(p)
    assert pr + nr == pytest.approx(1.0, abs=1e-12)


def test_unitaries_are_numpy_arrays():
    u = ifdsim.coherent_sequence_unitary(3, [1.0, 2.0, 0.5])
    assert u.shape == (3, 3)
    assert np.allclose(u.conj().T @ u, np.eye(3), atol=1e-12)
    s1 = ifdsim.beam_splitter(1)
    assert np.allclose(s1 @ s1 @ np.array([1, 0, 0]), [0, 1, 0], atol=1e-12)
    assert np.allclose(ifdsim.b_pulse(0.0), np.eye(3))


def test_projective():
    d = ifdsim.run_projective([math.pi])
    assert (d["p_det"], d["p_inconclusive"], d["p_abs"]) == pytest.approx((0.25, 0.25, 0.5), abs=1e-12)
    p_det, p_abs = ifdsim.projective_closed_form(2)
    assert p_det == pytest.approx(27 / 64, abs=1e-14)
    assert p_abs == pytest.approx(7 / 16, abs=1e-14)


def test_thermal_and_dissipative():
    rho = ifdsim.thermal_state("sample1")
    assert np.real(np.diag(rho)) == pytest.approx([0.9917, 0.0082, 0.0001], abs=5e-4)
    p = ifdsim.run_dissipative([math.pi], model="lindblad", sample="sample1")
    assert p[0] == pytest.approx(0.26, abs=0.02)
    assert sum(p) == pytest.approx(1.0, abs=1e-6)


def test_majorana_anchor():
    s1, s2 = ifdsim.majorana_stars(np.array([0.5, 0.5, 1 / math.sqrt(2)], dtype=complex))
    stars = sorted([tuple(s1), tuple(s2)], key=lambda s: s[1])
    assert stars[1] == pytest.approx((0.586, 0.792, -0.172), abs=1e-3)
    assert stars[0] == pytest.approx((0.586, -0.792, -0.172), abs=1e-3)


def test_shots_are_deterministic():
    a = ifdsim.sample_shots((0.25, 0.25, 0.5), 100000, 42)
    assert a == ifdsim.sample_shots((0.25, 0.25, 0.5), 100000, 42)
    assert sum(a) == 100000


def test_quantized_matches_semiclassical():
    g, tb, n = 2.5e7, 40e-9, 3
    theta = g * math.sqrt(n) * tb
    marg = ifdsim.quantized_marginals(2, n, g, tb)
    assert marg == pytest.approx(ifdsim.run_coherent([theta, theta]), abs=1e-9)


def test_errors_raise():
    with pytest.raises(ValueError):
        ifdsim.pr_nr((0.0, 0.0, 1.0))
    with pytest.raises(ValueError):
        ifdsim.run_scenario("n1_sweep", "bogus.key = 1")


def test_run_scenario():
    r = ifdsim.run_scenario("n1_sweep", "sweep.points = 5\nsweep.theta_max = pi")
    assert r["header"] == ["theta_rad", "p0", "p1", "p2", "pr", "nr", "eta_c"]
    assert len(r["rows"]) == 5
    assert float(r["rows"][-1][1]) == pytest.approx(0.25, abs=1e-12)
    summary = json.loads(r["summary"])
    assert summary["scenario"] == "n1_sweep"
    again = ifdsim.run_scenario("n1_sweep", "sweep.points = 5\nsweep.theta_max = pi", threads=2)
    assert again["csv"] == r["csv"]
