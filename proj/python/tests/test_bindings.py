# Copyright 2026 The robustlimit Authors
# SPDX-License-Identifier: Apache-2.0
import math

import numpy as np
import pytest

import robustlimit as rl


def test_bound_point_values():
    assert rl.infidelity_bound(0.15) == pytest.approx(1.59e-5, rel=1e-2)
    assert rl.infidelity_bound(0.30) == pytest.approx(2.59e-4, rel=1e-2)
    assert rl.fidelity_lower_bound(rl.PHYSICAL_RANGE_RAD) == pytest.approx(0.0, abs=1e-12)
    assert rl.PHYSICAL_RANGE_RAD == pytest.approx(2 * math.sqrt(math.log(1 + math.sqrt(2))))


def test_invert_bound_round_trip():
    hz = rl.invert_bound(1e-4, 25e-9)
    assert hz == pytest.approx(1.51e6, rel=1e-2)
    t_omega = hz * 2 * math.pi * 25e-9
    assert rl.infidelity_bound(t_omega) == pytest.approx(1e-4, rel=1e-9)
    with pytest.raises(rl.Error):
        rl.invert_bound(0.0, 25e-9)


def test_bound_curve():
    curve = rl.bound_curve(0.1, 1.0, 10)
    assert len(curve) == 10
    assert curve[0][0] == pytest.approx(0.1)
    assert all(b[1] > a[1] for a, b in zip(curve, curve[1:]))
    with pytest.raises(ValueError):
        rl.bound_curve(0.5, 0.4, 10)


def test_fidelity_measures():
    u = np.diag(np.exp(1j * np.array([0.3, -0.3])))
    assert rl.worst_case_exact(u) == pytest.approx(math.cos(0.3), rel=1e-9)
    assert rl.worst_case_lower_bound(u) == pytest.approx(math.cos(0.3), rel=1e-12)
    assert rl.average_lower_bound(u) == pytest.approx(math.cos(0.3), rel=1e-12)
    value, phi = rl.nuclear_fidelity(np.eye(4, dtype=complex), 2, 2)
    assert value == pytest.approx(1.0)
    assert np.allclose(phi, np.eye(2))
    assert rl.op_norm(2 * np.eye(3, dtype=complex)) == pytest.approx(2.0)
    with pytest.raises(rl.Error):
        rl.worst_case_exact(2 * np.eye(2, dtype=complex))


def test_ordering_chain_on_random_unitaries():
    rng = np.random.default_rng(5)
    for _ in range(20):
        z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        q, r = np.linalg.qr(z)
        u = q * (np.diag(r) / np.abs(np.diag(r)))
        low = rl.worst_case_lower_bound(u)
        assert rl.average_lower_bound(u) >= low - 1e-12
        assert rl.worst_case_exact(u, 2) >= low - 1e-12
        assert rl.nuclear_fidelity(u, 2, 2)[0] >= rl.average_lower_bound(u) - 1e-12


def test_optimize_hadamard_small():
    out = rl.optimize_hadamard(q_B=1, restarts=4, max_iters=1500, seed=3)
    assert 1 - out["nominal_fidelity"] < 1e-8
    assert out["robustness"] < 1e-4
    assert out["max_abs_amplitude"] <= 7.5
    assert out["nullspace_residual"] < 1e-4
    assert len(out["channels"]) == 2
    assert len(out["channels"][0]) == 5


def test_run_in_process(tmp_path):
    code, summary = rl.run("gate-table", tmp_path, epsilons=[1e-5], gate_times_ns=[100])
    assert code == 0
    assert summary["cells"][0]["omega_hz"] == pytest.approx(213e3, rel=1e-2)
    assert (tmp_path / "gate_table.csv").exists()
    assert (tmp_path / "gate-table.manifest.json").exists()
