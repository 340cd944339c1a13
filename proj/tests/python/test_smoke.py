"""Smoke tests for the Python bindings."""

import math

import numpy as np
import pytest

import trineq


def random_psd(dim, seed):
    return trineq.random_psd(dim, 1.0, seed)


def test_eig_and_reconstruction():
    h = trineq.random_hermitian(5, 1.0, 3)
    lam, vec = trineq.eig_hermitian(h)
    assert np.all(np.diff(lam) >= 0)
    assert np.linalg.norm(vec @ np.diag(lam) @ vec.conj().T - h) <= 1e-10


def test_phi_p_single_is_trace():
    a = random_psd(3, 1)
    assert trineq.phi_p([a], 0.7) == pytest.approx(np.trace(a).real, rel=1e-11)


def test_phi_p_shape_error():
    with pytest.raises(RuntimeError):
        trineq.phi_p([random_psd(2, 1), random_psd(3, 1)], 1.0)


def test_mat_power_round_trip():
    a = random_psd(4, 5)
    back = trineq.mat_power(trineq.mat_power(a, 2.0), 0.5)
    assert np.linalg.norm(back - a) <= 1e-9 * np.linalg.norm(a)


def test_partial_trace_of_product():
    a = random_psd(3, 7)
    b = random_psd(2, 8)
    joint = trineq.kron(a, b)
    reduced = trineq.partial_trace(joint, [3, 2], 1)
    assert np.linalg.norm(reduced - np.trace(a).real * b) <= 1e-11


def test_entropy_of_maximally_mixed():
    rho = np.eye(4, dtype=complex)
    assert trineq.entropy(rho) == pytest.approx(math.log(4), abs=1e-12)


def test_ssa_deficit_nonnegative():
    rho = random_psd(8, 11)
    assert trineq.ssa_deficit(rho, [2, 2, 2]) >= -1e-9


def test_minkowski2_equality_at_p1():
    a = random_psd(4, 13)
    lhs, rhs = trineq.minkowski2_sides(a, [2, 2], 1.0)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_group_average_residual():
    a = trineq.random_hermitian(6, 1.0, 17)
    assert trineq.group_average_residual(a, [3, 2], 2) <= 1e-12


def test_midpoint_probe_report():
    rep = trineq.midpoint_probe(0.5, n=2, dim=3, trials=50, seed=19)
    assert rep["violations"] == 0
    assert rep["contract"] is True
    assert len(rep["slacks"]) == 50


def test_counterexample_has_positive_margin():
    rep = trineq.counterexample(3.0, dim=2, seed=5)
    assert rep["violations"] == 0
    assert rep["worst_slack"] > 1e-8
    assert rep["witness"]["lambda"] >= 10


def test_bks_sides_ordering():
    a = random_psd(4, 23)
    b = random_psd(4, 29)
    lhs, rhs = trineq.bks_sides(a, b, 1.5)
    assert lhs >= rhs - 1e-9


def test_classical_oracle_tensor():
    rng = np.random.default_rng(31)
    f = rng.uniform(size=(2, 3, 2))
    lhs, rhs = trineq.classical_minkowski3_sides(f, 2.0)
    assert rhs >= lhs - 1e-12
    assert trineq.classical_ssa_deficit(f) >= -1e-12


def test_matrix_json_round_trip():
    h = trineq.random_hermitian(3, 1.0, 37)
    text = trineq.matrix_to_json(h)
    back = trineq.matrix_from_json(text)
    assert np.array_equal(back, h)


def test_report_determinism_across_threads():
    one = trineq.verify_ssa(40, [2, 2, 2], seed=41, threads=1)
    four = trineq.verify_ssa(40, [2, 2, 2], seed=41, threads=4)
    assert one == four
