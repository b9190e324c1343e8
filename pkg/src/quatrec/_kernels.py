"""Hot loops: direct-summation QFT and limiting-operator kernel tables.

Each kernel exists twice, a plain-loop version compiled with numba and a
vectorised numpy version.  The public wrappers pick one according to
``quatrec._accel.USE_NUMBA``.  Both versions multiply quaternions in the
literal left-to-right order of the defining sums; neither uses the complex
split of the fast transform, so they can serve as oracles for it.
"""
import math

import numpy as np

from . import _accel
from .quaternion import exp_i, exp_j, qmul

TWO_PI = 2.0 * math.pi


@_accel.njit
def _qmul4(a0, a1, a2, a3, b0, b1, b2, b3):
    return (
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


@_accel.njit
def naive_qft_loops(f, inverse):
    n1 = f.shape[0]
    n2 = f.shape[1]
    out = np.zeros((n1, n2, 4))
    scale = 1.0 / math.sqrt(n1 * n2)
    sgn = 1.0 if inverse else -1.0
    cos1 = np.cos(TWO_PI * np.arange(n1) / n1)
    sin1 = sgn * np.sin(TWO_PI * np.arange(n1) / n1)
    cos2 = np.cos(TWO_PI * np.arange(n2) / n2)
    sin2 = sgn * np.sin(TWO_PI * np.arange(n2) / n2)
    for m1 in range(n1):
        for m2 in range(n2):
            s0 = 0.0
            s1 = 0.0
            s2 = 0.0
            s3 = 0.0
            for a in range(n1):
                ci = cos1[(a * m1) % n1]
                si = sin1[(a * m1) % n1]
                for b in range(n2):
                    cj = cos2[(b * m2) % n2]
                    sj = sin2[(b * m2) % n2]
                    q0, q1, q2, q3 = f[a, b, 0], f[a, b, 1], f[a, b, 2], f[a, b, 3]
                    if inverse:
                        # F e^{j phi} e^{i theta}
                        q0, q1, q2, q3 = _qmul4(q0, q1, q2, q3, cj, 0.0, sj, 0.0)
                        q0, q1, q2, q3 = _qmul4(q0, q1, q2, q3, ci, si, 0.0, 0.0)
                    else:
                        # f e^{-i theta} e^{-j phi}
                        q0, q1, q2, q3 = _qmul4(q0, q1, q2, q3, ci, si, 0.0, 0.0)
                        q0, q1, q2, q3 = _qmul4(q0, q1, q2, q3, cj, 0.0, sj, 0.0)
                    s0 += q0
                    s1 += q1
                    s2 += q2
                    s3 += q3
            out[m1, m2, 0] = s0 * scale
            out[m1, m2, 1] = s1 * scale
            out[m1, m2, 2] = s2 * scale
            out[m1, m2, 3] = s3 * scale
    return out


def _phase(n, sgn):
    idx = np.arange(n)
    return sgn * TWO_PI * (np.outer(idx, idx) % n) / n


def naive_qft_numpy(f, inverse):
    f = np.asarray(f, dtype=float)
    n1, n2 = f.shape[:2]
    sgn = 1.0 if inverse else -1.0
    ei = exp_i(_phase(n1, sgn))  # [a, m1]
    ej = exp_j(_phase(n2, sgn))  # [b, m2]
    out = np.empty((n1, n2, 4))
    for m1 in range(n1):
        if inverse:
            t = qmul(f[:, :, None, :], ej[None, :, :, :])
            t = qmul(t, ei[:, m1][:, None, None, :])
        else:
            t = qmul(f, ei[:, m1][:, None, :])
            t = qmul(t[:, :, None, :], ej[None, :, :, :])
        out[m1] = t.sum(axis=(0, 1))
    return out / math.sqrt(n1 * n2)


def naive_qft(f, inverse=False):
    f = np.ascontiguousarray(f, dtype=np.float64)
    if _accel.USE_NUMBA:
        return naive_qft_loops(f, bool(inverse))
    return naive_qft_numpy(f, bool(inverse))


@_accel.njit
def kernel_table_loops(t_cells, x_cells, w_cells, n1, n2):
    """k(t, x) = (1/N) sum_w e^{-i t1 w1} e^{-j t2 w2} e^{j x2 w2} e^{i x1 w1}."""
    P = t_cells.shape[0]
    Q = x_cells.shape[0]
    R = w_cells.shape[0]
    out = np.zeros((P, Q, 4))
    inv_n = 1.0 / (n1 * n2)
    # only k mod n enters each phase, so tabulate once
    cos1 = np.cos(TWO_PI * np.arange(n1) / n1)
    sin1 = np.sin(TWO_PI * np.arange(n1) / n1)
    cos2 = np.cos(TWO_PI * np.arange(n2) / n2)
    sin2 = np.sin(TWO_PI * np.arange(n2) / n2)
    for p in range(P):
        t1 = t_cells[p, 0]
        t2 = t_cells[p, 1]
        for q in range(Q):
            x1 = x_cells[q, 0]
            x2 = x_cells[q, 1]
            s0 = 0.0
            s1 = 0.0
            s2 = 0.0
            s3 = 0.0
            for r in range(R):
                w1 = w_cells[r, 0]
                w2 = w_cells[r, 1]
                a = (t1 * w1) % n1
                b = (t2 * w2) % n2
                c = (x2 * w2) % n2
                d = (x1 * w1) % n1
                q0, q1, q2, q3 = cos1[a], -sin1[a], 0.0, 0.0
                q0, q1, q2, q3 = _qmul4(q0, q1, q2, q3, cos2[b], 0.0, -sin2[b], 0.0)
                q0, q1, q2, q3 = _qmul4(q0, q1, q2, q3, cos2[c], 0.0, sin2[c], 0.0)
                q0, q1, q2, q3 = _qmul4(q0, q1, q2, q3, cos1[d], sin1[d], 0.0, 0.0)
                s0 += q0
                s1 += q1
                s2 += q2
                s3 += q3
            out[p, q, 0] = s0 * inv_n
            out[p, q, 1] = s1 * inv_n
            out[p, q, 2] = s2 * inv_n
            out[p, q, 3] = s3 * inv_n
    return out


def kernel_table_numpy(t_cells, x_cells, w_cells, n1, n2, chunk=256):
    t_cells = np.asarray(t_cells, dtype=np.int64).reshape(-1, 2)
    x_cells = np.asarray(x_cells, dtype=np.int64).reshape(-1, 2)
    w_cells = np.asarray(w_cells, dtype=np.int64).reshape(-1, 2)
    w1, w2 = w_cells[:, 0], w_cells[:, 1]
    out = np.zeros((len(t_cells), len(x_cells), 4))
    if len(w_cells) == 0:
        return out
    for start in range(0, len(x_cells), chunk):
        xc = x_cells[start:start + chunk]
        c = TWO_PI * ((xc[:, 1:2] * w2[None, :]) % n2) / n2
        d = TWO_PI * ((xc[:, 0:1] * w1[None, :]) % n1) / n1
        right = qmul(exp_j(c), exp_i(d))  # [x, w]
        for p, (t1, t2) in enumerate(t_cells):
            a = -TWO_PI * ((t1 * w1) % n1) / n1
            b = -TWO_PI * ((t2 * w2) % n2) / n2
            left = qmul(exp_i(a), exp_j(b))  # [w]
            out[p, start:start + chunk] = qmul(left[None], right).sum(axis=1)
    return out / (n1 * n2)


def kernel_table(t_cells, x_cells, w_cells, n1, n2):
    t_cells = np.ascontiguousarray(np.asarray(t_cells, dtype=np.int64).reshape(-1, 2))
    x_cells = np.ascontiguousarray(np.asarray(x_cells, dtype=np.int64).reshape(-1, 2))
    w_cells = np.ascontiguousarray(np.asarray(w_cells, dtype=np.int64).reshape(-1, 2))
    if _accel.USE_NUMBA:
        return kernel_table_loops(t_cells, x_cells, w_cells, int(n1), int(n2))
    return kernel_table_numpy(t_cells, x_cells, w_cells, int(n1), int(n2))
