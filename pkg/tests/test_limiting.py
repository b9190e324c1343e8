import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quatrec.dqft import qft_forward
from quatrec.errors import ShapeError, SpecError
from quatrec.limiting import (
    LimitingPair,
    compose_FWST,
    compose_STFW,
    freq_limit,
    hs_norm,
    hs_norm_bruteforce,
    kernel_apply,
    kernel_disc,
    kernel_eval,
    kernel_matrix,
    kernel_rect_sinc,
    op_norm_estimate,
    space_limit,
)
from quatrec.quaternion import Quaternion
from quatrec.signal import Mask, MaskSpec, QSignal2D, apply_mask, inner_product, mask_from_spec


def pair_from(rows, cols, t_spec, w_spec):
    return LimitingPair(mask_from_spec(t_spec, rows, cols), mask_from_spec(w_spec, rows, cols))


def random_pair(rng, rows, cols, pt=0.4, pw=0.4):
    return LimitingPair(Mask(rng.random((rows, cols)) < pt), Mask(rng.random((rows, cols)) < pw))


def test_pair_shape_check():
    with pytest.raises(ShapeError):
        LimitingPair(Mask.full(4, 4), Mask.full(4, 5))


def test_space_limit(rng):
    f = QSignal2D.random(6, 6, rng)
    assert space_limit(f, LimitingPair(Mask.full(6, 6), Mask.full(6, 6))) == f
    assert space_limit(f, LimitingPair(Mask.empty(6, 6), Mask.full(6, 6))) == QSignal2D.zeros(6, 6)
    p = random_pair(rng, 6, 6)
    g = space_limit(f, p)
    assert g.norm() <= f.norm()
    assert space_limit(g, p) == g


def test_freq_limit(rng):
    f = QSignal2D.random(8, 6, rng)
    full = LimitingPair(Mask.empty(8, 6), Mask.full(8, 6))
    assert freq_limit(f, full).allclose(f, atol=1e-10)
    p = random_pair(rng, 8, 6)
    g = freq_limit(f, p)
    assert freq_limit(g, p).allclose(g, atol=1e-10)
    assert g.norm() <= f.norm() + 1e-10
    # spectrum of F_W f is chi_W times the spectrum of f
    lhs = qft_forward(g)
    rhs = apply_mask(qft_forward(f), p.w_mask)
    assert lhs.allclose(rhs, atol=1e-12)


def test_freq_limit_shape_error(rng):
    p = random_pair(rng, 4, 4)
    with pytest.raises(ShapeError):
        freq_limit(QSignal2D.zeros(4, 3), p)


def test_compose_empty_sets(rng):
    f = QSignal2D.random(5, 5, rng)
    assert compose_STFW(f, LimitingPair(Mask.empty(5, 5), Mask.full(5, 5))) == QSignal2D.zeros(5, 5)
    assert np.max(np.abs(compose_STFW(f, LimitingPair(Mask.full(5, 5), Mask.empty(5, 5))).data)) == 0.0


def test_compose_matches_kernel_summation(rng):
    for _ in range(5):
        p = random_pair(rng, 6, 6)
        f = QSignal2D.random(6, 6, rng)
        assert np.max(np.abs(compose_STFW(f, p).data - kernel_apply(f, p).data)) < 1e-9
        # unrestricted kernel summation reproduces F_W itself
        assert np.max(np.abs(freq_limit(f, p).data - kernel_apply(f, p, restrict_output=False).data)) < 1e-9


def test_compose_twice_contracts(rng):
    for _ in range(10):
        p = random_pair(rng, 8, 8, 0.2, 0.2)
        rho = hs_norm(p)
        f = QSignal2D.random(8, 8, rng)
        g = compose_STFW(compose_STFW(f, p), p)
        assert g.norm() <= (rho ** 2 + 1e-9) * f.norm()


def test_adjoint_under_real_inner_product(rng):
    p = random_pair(rng, 7, 5)
    f = QSignal2D.random(7, 5, rng)
    g = QSignal2D.random(7, 5, rng)
    lhs = inner_product(compose_STFW(f, p), g).w
    rhs = inner_product(f, compose_FWST(g, p)).w
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_kernel_eval_examples(rng):
    p_empty_w = LimitingPair(Mask.full(6, 6), Mask.empty(6, 6))
    assert kernel_eval(p_empty_w, (1, 2), (3, 4)) == Quaternion()
    p_full = LimitingPair(Mask.full(6, 6), Mask.full(6, 6))
    assert kernel_eval(p_full, (2, 3), (2, 3)).isclose(Quaternion(1.0), atol=1e-14)
    assert kernel_eval(p_full, (2, 3), (2, 4)).isclose(Quaternion(), atol=1e-14)
    p = LimitingPair(Mask.empty(6, 6), Mask.full(6, 6))
    assert kernel_eval(p, (0, 0), (0, 0)) == Quaternion()
    with pytest.raises(IndexError):
        kernel_eval(p_full, (6, 0), (0, 0))


def test_kernel_hermitian_symmetry(rng):
    p = LimitingPair(Mask.full(6, 6), Mask(rng.random((6, 6)) < 0.5))
    for _ in range(30):
        t = tuple(rng.integers(0, 6, 2))
        x = tuple(rng.integers(0, 6, 2))
        assert kernel_eval(p, t, x).conj().isclose(kernel_eval(p, x, t), atol=1e-14)


def test_kernel_column_is_band_limited_delta(rng):
    # k(t, .) = F_W applied to a unit delta at t, computed through the fast transform
    p = LimitingPair(Mask.full(5, 7), Mask(rng.random((5, 7)) < 0.5))
    K = kernel_matrix(p)
    for idx, (t1, t2) in enumerate(np.argwhere(np.ones((5, 7), bool))):
        d = np.zeros((5, 7, 4))
        d[t1, t2, 0] = 1.0
        col = freq_limit(QSignal2D(d), p).data.reshape(-1, 4)
        np.testing.assert_allclose(K[idx], col, atol=1e-13)


def test_rect_sinc_examples():
    p = pair_from(8, 8, MaskSpec.full(8, 8), MaskSpec.centered_rect(1, 1))
    om = 3 * math.pi / 8
    assert kernel_rect_sinc(p, (2, 2), (2, 2)).w == pytest.approx((om / math.pi) ** 2, rel=1e-15)
    assert kernel_rect_sinc(p, (3, 1), (3, 1), omega=0.7).w == pytest.approx((0.7 / math.pi) ** 2)
    assert abs(kernel_rect_sinc(p, (1, 0), (0, 0), omega=math.pi).w) < 1e-15
    with pytest.raises(SpecError):
        kernel_rect_sinc(pair_from(8, 8, MaskSpec.full(8, 8), MaskSpec.block(0, 0, 2, 2)), (0, 0), (0, 0))


def _periodized_sinc(u, omega, n, terms=20000):
    k = np.arange(-terms, terms + 1)
    v = u + k * n
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(v == 0, omega / math.pi, np.sin(omega * v) / (math.pi * v))
    return float(s.sum())


def test_discrete_kernel_vs_periodized_sinc():
    n = 64
    p = pair_from(n, n, MaskSpec.full(n, n), MaskSpec.centered_rect(6, 6))
    om = math.pi * 13 / n
    x = (30, 30)
    for off in [(0, 0), (1, 0), (0, 2), (2, 3), (4, 1)]:
        t = (x[0] + off[0], x[1] + off[1])
        disc = kernel_eval(p, t, x)
        assert max(abs(disc.x), abs(disc.y), abs(disc.z)) < 1e-12
        ref = _periodized_sinc(off[0], om, n) * _periodized_sinc(off[1], om, n)
        assert abs(disc.w - ref) <= 0.05 * abs(ref)
        cont = kernel_rect_sinc(p, t, x).w
        assert abs(disc.w - cont) <= 0.05 * abs(cont)


def test_disc_kernel_origin():
    k = kernel_disc(1.0, (0, 0), (0, 0))
    # (1/(2pi)^2) * int_0^{2pi} int_0^1 r dr dth = pi / (4 pi^2)
    assert k.isclose(Quaternion(1 / (4 * math.pi)), atol=1e-12)
    kc = kernel_disc(2.5, (0, 0), (0, 0), corrected=True)
    assert kc.isclose(Quaternion(2.5 ** 2 / (4 * math.pi)), atol=1e-12)


def test_disc_kernel_radius_independent_as_printed():
    a = kernel_disc(0.3, (1.0, -0.5), (0.2, 2.0))
    b = kernel_disc(7.0, (1.0, -0.5), (0.2, 2.0))
    assert a == b
    c = kernel_disc(7.0, (1.0, -0.5), (0.2, 2.0), corrected=True)
    assert not a.isclose(c, atol=1e-6)


def test_disc_kernel_hermitian(rng):
    for _ in range(5):
        t = tuple(rng.uniform(-3, 3, 2))
        x = tuple(rng.uniform(-3, 3, 2))
        assert kernel_disc(1.0, t, x).conj().isclose(kernel_disc(1.0, x, t), atol=1e-6)


def test_disc_kernel_against_adaptive_quadrature():
    integrate = pytest.importorskip("scipy.integrate")
    from quatrec.quaternion import exp_i, exp_j, qmul

    t, x = (0.7, -1.1), (1.3, 0.4)

    def comp(r, th, k):
        e = qmul(qmul(exp_i(-t[0] * r * math.cos(th)), exp_j((x[1] - t[1]) * r * math.sin(th))),
                 exp_i(x[0] * r * math.cos(th)))
        return e[k] * r

    ref = [integrate.dblquad(lambda r, th: comp(r, th, k), 0, 2 * math.pi, 0, 1, epsabs=1e-12)[0]
           for k in range(4)]
    got = kernel_disc(1.0, t, x).to_array()
    np.testing.assert_allclose(got, np.array(ref) / (2 * math.pi) ** 2, atol=1e-9)


def test_hs_norm_worked_example():
    p = pair_from(8, 8, MaskSpec.block(2, 3, 2, 2), MaskSpec.centered_rect(1, 1))
    assert (p.t_mask.count, p.w_mask.count) == (4, 9)
    assert hs_norm_bruteforce(p, "FW_ST") == pytest.approx(0.75, abs=1e-9)
    assert hs_norm_bruteforce(p, "ST_FW") == pytest.approx(0.75, abs=1e-9)
    assert hs_norm(p, verify=True) == 0.75


def test_hs_norm_edge_cases():
    p0 = LimitingPair(Mask.empty(6, 6), Mask.full(6, 6))
    assert hs_norm(p0) == 0.0 == hs_norm_bruteforce(p0)
    pf = LimitingPair(Mask.full(6, 6), Mask.full(6, 6))
    assert hs_norm(pf) == 6.0
    assert hs_norm_bruteforce(pf, "FW_ST") == pytest.approx(6.0, abs=1e-9)
    with pytest.raises(ValueError):
        hs_norm_bruteforce(pf, "sideways")


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_hs_lemmas_random(rows, cols, seed):
    rng = np.random.default_rng(seed)
    p = random_pair(rng, rows, cols, rng.uniform(0, 1), rng.uniform(0, 1))
    a = hs_norm_bruteforce(p, "FW_ST")
    b = hs_norm_bruteforce(p, "ST_FW")
    closed = hs_norm(p)
    assert abs(a - closed) <= 1e-9
    assert abs(a - b) <= 1e-9


def test_op_norm_estimate():
    full = LimitingPair(Mask.full(8, 8), Mask.full(8, 8))
    assert op_norm_estimate(full, 5) == pytest.approx(1.0, abs=1e-12)
    assert op_norm_estimate(LimitingPair(Mask.empty(8, 8), Mask.full(8, 8)), 5) == 0.0
    with pytest.raises(ValueError):
        op_norm_estimate(full, 0)


def test_op_norm_below_hs(rng):
    for _ in range(20):
        p = random_pair(rng, 8, 8, rng.uniform(0.02, 0.6), rng.uniform(0.02, 0.6))
        assert op_norm_estimate(p, 40) <= hs_norm(p) + 1e-9


def test_op_norm_estimate_matches_dense_svd(rng):
    # dense real matrix of S_T F_W on a tiny grid
    p = random_pair(rng, 4, 3, 0.5, 0.5)
    n = 4 * 3 * 4
    cols = []
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        cols.append(compose_STFW(QSignal2D(e.reshape(4, 3, 4)), p).data.ravel())
    sigma = np.linalg.svd(np.array(cols).T, compute_uv=False)[0]
    est = op_norm_estimate(p, 500)
    assert est <= sigma + 1e-12
    assert est == pytest.approx(sigma, rel=1e-6)
