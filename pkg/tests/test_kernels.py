import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlandauer import _kernels_py, kernels
from qlandauer.erasure import analyze_point, compute_R
from qlandauer.model import ModelParams

BACKENDS = kernels.available_backends()
compiled_only = pytest.mark.skipif("compiled" not in BACKENDS, reason="extension not built")


@pytest.fixture(params=BACKENDS)
def backend(request):
    return kernels.get_backend(request.param)


def test_python_backend_always_available():
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_merge_basic(backend):
    q = np.array([-1.0, 0.0, 1e-12, 2.0, 2.0 + 5e-10])
    w = np.array([0.1, 0.2, 0.2, 0.3, 0.2])
    mq, mw = backend.merge_sorted_comb(q, w, 1e-9)
    np.testing.assert_allclose(mq, [-1.0, 0.5e-12, 2.0 + 0.2e-9], rtol=0, atol=1e-15)
    np.testing.assert_allclose(mw, [0.1, 0.4, 0.5], atol=1e-15)


def test_merge_zero_weight_cluster_uses_plain_mean(backend):
    mq, mw = backend.merge_sorted_comb(np.array([1.0, 1.0 + 1e-10]), np.zeros(2), 1e-9)
    assert mq[0] == pytest.approx(1.0 + 0.5e-10, abs=1e-16) and mw[0] == 0.0


def test_merge_empty(backend):
    mq, mw = backend.merge_sorted_comb(np.zeros(0), np.zeros(0), 1e-9)
    assert len(mq) == 0 and len(mw) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 400), st.floats(1e-12, 1e-1))
def test_merge_properties(seed, n, tol):
    r = np.random.default_rng(seed)
    q = np.sort(np.round(r.normal(size=n), int(r.integers(1, 6))))
    w = r.random(n)
    mq, mw = _kernels_py.merge_sorted_comb(q, w, tol)
    assert mw.sum() == pytest.approx(w.sum(), rel=1e-12)
    assert np.all(np.diff(mq) > tol)
    assert np.dot(mq, mw) == pytest.approx(np.dot(q, w), rel=1e-9, abs=1e-12)


@compiled_only
@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(0, 500), st.floats(1e-12, 1e-1))
def test_merge_backends_bitwise_equal(seed, n, tol):
    r = np.random.default_rng(seed)
    q = np.sort(np.round(r.normal(size=n), 3))
    w = r.random(n)
    a = kernels.get_backend("python").merge_sorted_comb(q, w, tol)
    b = kernels.get_backend("compiled").merge_sorted_comb(q, w, tol)
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])


@compiled_only
@pytest.mark.parametrize("d", [2, 4, 8, 16, 32, 64])
def test_golden_backends_bitwise_equal(d):
    a = kernels.get_backend("python").golden_max_r(float(d), 1e-3, 0.5, 1e-10)
    b = kernels.get_backend("compiled").golden_max_r(float(d), 1e-3, 0.5, 1e-10)
    assert a == b


def test_golden_finds_interior_max(backend):
    r, f = backend.golden_max_r(2.0, 0.01, 0.3, 1e-12)
    # the maximum is flat, so r is only located to about sqrt(machine eps)
    lg = math.log((1 - r) / r)
    assert abs((1 - 2 * r) * lg * lg - 2 * lg) < 1e-6
    # root of the derivative (1 - 2r) L^2 - 2 L by bisection
    lo, hi = 0.01, 0.3
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        L = math.log((1 - mid) / mid)
        if (1 - 2 * mid) * L * L - 2 * L > 0:
            lo = mid
        else:
            hi = mid
    assert r == pytest.approx(lo, abs=1e-7)
    assert f == pytest.approx(backend.landauer_r_objective(r, 2.0), abs=0)


def test_set_backend_changes_nothing_numerically():
    params = ModelParams.from_jt(0.8, N=3, alpha=0.7, beta=2.0)
    previous = kernels.BACKEND
    rows = []
    try:
        for name in BACKENDS:
            kernels.set_backend(name)
            compute_R.cache_clear()
            an = analyze_point(params)
            rows.append((an.record.as_row(), an.distribution.q.tobytes(), an.distribution.p.tobytes()))
    finally:
        kernels.set_backend(previous)
        compute_R.cache_clear()
    assert all(row == rows[0] for row in rows)


def test_fallback_when_extension_missing(monkeypatch):
    import importlib
    import sys

    import qlandauer

    monkeypatch.setitem(sys.modules, "qlandauer._kernels", None)
    monkeypatch.delattr(qlandauer, "_kernels", raising=False)
    try:
        importlib.reload(kernels)
        assert kernels.BACKEND == "python"
        assert kernels.available_backends() == ["python"]
        q, w = kernels.merge_sorted_comb(np.array([0.0, 1e-12, 1.0]), np.array([0.5, 0.25, 0.25]), 1e-9)
        assert len(q) == 2
    finally:
        monkeypatch.undo()
        importlib.reload(kernels)
    assert kernels.available_backends() == BACKENDS
