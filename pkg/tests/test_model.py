import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlandauer.errors import DomainError
from qlandauer.linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, commutator, max_abs
from qlandauer.model import (
    ModelParams,
    build_h_env,
    build_h_int,
    build_h_sys,
    build_h_total,
    env_all_zero_index,
    prepare_system,
    total_magnetization,
)


def test_params_validation():
    with pytest.raises(DomainError):
        ModelParams(N=0)
    with pytest.raises(DomainError):
        ModelParams(N=7)
    with pytest.raises(DomainError):
        ModelParams(alpha=1.5)
    with pytest.raises(DomainError):
        ModelParams(beta=-1)
    with pytest.raises(DomainError):
        ModelParams(B=float("nan"))
    with pytest.raises(DomainError):
        ModelParams.from_jt(1.0, J=0.0)
    p = ModelParams.from_jt(0.5, J=2.0)
    assert p.t == 0.25 and p.Jt == 0.5


def test_h_env_single_spin_is_field():
    np.testing.assert_array_equal(build_h_env(ModelParams(N=1, B=1.0)).matrix, SIGMA_Z)
    evals, _ = build_h_env(ModelParams(N=1, B=0.3)).spectrum()
    np.testing.assert_allclose(evals, [-0.3, 0.3], atol=1e-15)


def test_h_env_pair_hand_diagonalization():
    # XX + YY on two spins flips |10> <-> |01> with amplitude 2 and kills |11>, |00>:
    # the 2x2 block [[0, 2], [2, 0]] has eigenvalues -2, +2.
    h = build_h_env(ModelParams(N=2, J=1.0, B=0.0))
    expected = np.zeros((4, 4))
    expected[1, 2] = expected[2, 1] = 2.0
    np.testing.assert_array_equal(h.matrix, expected)
    np.testing.assert_allclose(h.spectrum()[0], [-2, 0, 0, 2], atol=1e-14)


@pytest.mark.parametrize("n", range(1, 7))
def test_h_env_conserves_magnetization(n):
    h = build_h_env(ModelParams(N=n, J=0.8, B=0.3))
    assert max_abs(commutator(h, total_magnetization(n, include_system=False))) <= 1e-12


def test_h_int_cases():
    assert max_abs(build_h_int(ModelParams(N=3, J0=0.0)).matrix) == 0.0
    h = build_h_int(ModelParams(N=1, J0=1.0))
    np.testing.assert_allclose(h.matrix, np.kron(SIGMA_X, SIGMA_X) + np.kron(SIGMA_Y, SIGMA_Y))
    np.testing.assert_allclose(h.spectrum()[0], [-2, 0, 0, 2], atol=1e-14)


def test_h_int_touches_only_site_one():
    h = build_h_int(ModelParams(N=3, J0=1.0)).matrix
    expected = np.kron(np.kron(SIGMA_X, SIGMA_X) + np.kron(SIGMA_Y, SIGMA_Y), np.eye(4))
    np.testing.assert_allclose(h, expected)


def test_h_int_changes_magnetization_only_by_swap():
    n = 2
    h = build_h_int(ModelParams(N=n, J0=1.0)).matrix
    m_s = np.diag(np.kron(SIGMA_Z, np.eye(2**n))).real
    m_e = np.diag(np.kron(np.eye(2), total_magnetization(n, include_system=False))).real
    for i, j in zip(*np.nonzero(np.abs(h) > 0)):
        # exactly one excitation moves between system and chain
        assert abs(m_s[i] - m_s[j]) == 2 and m_s[i] + m_e[i] == m_s[j] + m_e[j]


def test_h_sys_convention():
    np.testing.assert_array_equal(build_h_sys(ModelParams(B0=1.0)).matrix, np.diag([1.0, -1.0]))
    assert max_abs(build_h_sys(ModelParams(B0=0.0)).matrix) == 0.0
    evals, _ = build_h_sys(ModelParams(B0=-2.5)).spectrum()
    assert evals[0] == -evals[1]


def test_h_total_single_spin_brute_force():
    # Basis |1 1>, |1 0>, |0 1>, |0 0> (system first); written out by hand.
    b0, b, j0 = 0.7, 1.1, 0.4
    h = np.array(
        [
            [b0 + b, 0, 0, 0],
            [0, b0 - b, 2 * j0, 0],
            [0, 2 * j0, -b0 + b, 0],
            [0, 0, 0, -b0 - b],
        ]
    )
    got = build_h_total(ModelParams(N=1, B0=b0, B=b, J0=j0))
    np.testing.assert_allclose(got.matrix, h, atol=1e-15)
    np.testing.assert_allclose(np.sort(np.linalg.eigvals(h).real), got.spectrum()[0], atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(
    n=st.integers(1, 4),
    j=st.floats(-2, 2),
    j0=st.floats(-2, 2),
    b=st.floats(-2, 2),
    b0=st.floats(-2, 2),
)
def test_h_total_hermitian(n, j, j0, b, b0):
    h = build_h_total(ModelParams(N=n, J=j, J0=j0, B=b, B0=b0)).matrix
    assert max_abs(h - h.conj().T) <= 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_h_total_matched_conserves_magnetization(n):
    h = build_h_total(ModelParams(N=n, J=0.9, J0=0.9, B=0.4, B0=0.4))
    assert max_abs(commutator(h, total_magnetization(n))) <= 1e-10


def test_prepare_system():
    np.testing.assert_array_equal(prepare_system(1.0), np.diag([1.0, 0.0]))
    np.testing.assert_array_equal(prepare_system(0.0), np.diag([0.0, 1.0]))
    np.testing.assert_allclose(prepare_system(1 / math.sqrt(2)), np.full((2, 2), 0.5), atol=1e-15)
    with pytest.raises(DomainError):
        prepare_system(-0.1)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 1))
def test_prepare_system_is_projector(alpha):
    rho = prepare_system(alpha)
    assert max_abs(rho @ rho - rho) <= 1e-12


def test_env_all_zero_index():
    # |0> is the -1 eigenstate of sigma_z, i.e. basis index 1 on every site
    n = 3
    m = np.diag(total_magnetization(n, include_system=False)).real
    assert m[env_all_zero_index(n)] == -n
