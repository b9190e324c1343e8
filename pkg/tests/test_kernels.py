"""The numba loop kernels and the numpy fallbacks must agree."""
import numpy as np
import pytest

from quatrec import _accel, _kernels
from quatrec.dqft import qft_naive
from quatrec.signal import QSignal2D

pytestmark = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


@pytest.mark.parametrize("shape", [(1, 1), (3, 5), (8, 8), (7, 4)])
@pytest.mark.parametrize("inverse", [False, True])
def test_naive_qft_backends_agree(shape, inverse, rng):
    f = rng.standard_normal(shape + (4,))
    a = _kernels.naive_qft_loops(f, inverse)
    b = _kernels.naive_qft_numpy(f, inverse)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


@pytest.mark.parametrize("shape", [(4, 4), (6, 5), (3, 8)])
def test_kernel_table_backends_agree(shape, rng):
    n1, n2 = shape
    allc = np.argwhere(np.ones(shape, bool))
    w = allc[rng.random(len(allc)) < 0.4]
    t = allc[rng.random(len(allc)) < 0.5]
    a = _kernels.kernel_table_loops(t, allc, w, n1, n2)
    b = _kernels.kernel_table_numpy(t, allc, w, n1, n2, chunk=7)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-13)


def test_kernel_table_empty_band():
    allc = np.argwhere(np.ones((3, 3), bool))
    empty = np.zeros((0, 2), np.int64)
    assert not np.any(_kernels.kernel_table_loops(allc, allc, empty, 3, 3))
    assert not np.any(_kernels.kernel_table_numpy(allc, allc, empty, 3, 3))


def test_dispatch_honours_flag(monkeypatch, rng):
    f = QSignal2D.random(5, 6, rng)
    monkeypatch.setattr(_accel, "USE_NUMBA", True)
    a = qft_naive(f)
    monkeypatch.setattr(_accel, "USE_NUMBA", False)
    b = qft_naive(f)
    assert a.allclose(b, atol=1e-12)


def test_env_flag_disables_numba(monkeypatch):
    import importlib

    monkeypatch.setenv("QUATREC_DISABLE_NUMBA", "1")
    mod = importlib.reload(_accel)
    try:
        assert mod.DISABLED and not mod.USE_NUMBA
    finally:
        monkeypatch.delenv("QUATREC_DISABLE_NUMBA")
        importlib.reload(_accel)
