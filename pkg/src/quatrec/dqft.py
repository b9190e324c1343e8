"""Discrete right-sided quaternion Fourier transform.

Forward::

    F[m1, m2] = 1/sqrt(N1 N2) sum_n f[n1, n2] e^{-i 2pi n1 m1/N1} e^{-j 2pi n2 m2/N2}

Inverse::

    f[n1, n2] = 1/sqrt(N1 N2) sum_m F[m1, m2] e^{+j 2pi n2 m2/N2} e^{+i 2pi n1 m1/N1}

The i-kernel runs along axis 0 (rows), the j-kernel along axis 1 (columns).
Both directions are unitary, so energy is preserved exactly.

The fast path splits the signal into two complex planes per stage.  For the
i-stage ``f = a + b j`` with ``a, b`` in span{1, i}; since
``j e^{-i t} = e^{i t} j`` the ``b`` plane is transformed with the opposite
sign.  For the j-stage ``g = c + d i`` with ``c, d`` in span{1, j}, and
``i e^{-j t} = e^{j t} i`` flips the sign for ``d`` in the same way.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .signal import QSignal2D

__all__ = ["DqftPlan", "qft_forward", "qft_inverse", "qft_naive", "FORWARD", "INVERSE"]

FORWARD = "forward"
INVERSE = "inverse"


@dataclass(frozen=True)
class DqftPlan:
    """Transform geometry plus the twiddle tables of the direct sum.

    ``cos_i[n1, m1]``/``sin_i`` hold ``2pi n1 m1 / N1`` and likewise for the
    j axis.  The fast path does not need them; :meth:`naive` and kernel
    summation code do.
    """

    rows: int
    cols: int
    direction: str = FORWARD
    cos_i: np.ndarray = field(init=False, repr=False, compare=False)
    sin_i: np.ndarray = field(init=False, repr=False, compare=False)
    cos_j: np.ndarray = field(init=False, repr=False, compare=False)
    sin_j: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"bad grid {self.rows}x{self.cols}")
        if self.direction not in (FORWARD, INVERSE):
            raise ValueError(f"direction must be {FORWARD!r} or {INVERSE!r}")
        for name, n in (("i", self.rows), ("j", self.cols)):
            k = np.arange(n)
            ang = 2.0 * np.pi * (np.outer(k, k) % n) / n
            c, s = np.cos(ang), np.sin(ang)
            c.setflags(write=False)
            s.setflags(write=False)
            object.__setattr__(self, f"cos_{name}", c)
            object.__setattr__(self, f"sin_{name}", s)

    @property
    def n_px(self) -> int:
        return self.rows * self.cols

    def __call__(self, f: QSignal2D) -> QSignal2D:
        self._check(f)
        if self.direction == FORWARD:
            return qft_forward(f)
        return qft_inverse(f)

    def naive(self, f: QSignal2D) -> QSignal2D:
        self._check(f)
        return qft_naive(f, self.direction)

    def _check(self, f):
        if f.shape != (self.rows, self.cols):
            from .errors import ShapeError

            raise ShapeError(f"shape: plan is {self.rows}x{self.cols}, signal is {f.shape}")


def _fwd_arrays(q: np.ndarray) -> np.ndarray:
    # i-stage along axis 0: f = a + b j
    a = q[..., 0] + 1j * q[..., 1]
    b = q[..., 2] + 1j * q[..., 3]
    A = np.fft.fft(a, axis=0, norm="ortho")
    B = np.fft.ifft(b, axis=0, norm="ortho")
    # j-stage along axis 1: g = c + d i, with j playing the complex unit
    c = A.real + 1j * B.real
    d = A.imag - 1j * B.imag
    C = np.fft.fft(c, axis=1, norm="ortho")
    D = np.fft.ifft(d, axis=1, norm="ortho")
    return np.stack([C.real, D.real, C.imag, -D.imag], axis=-1)


def _inv_arrays(q: np.ndarray) -> np.ndarray:
    # undo the j-stage first: F = C + D i
    C = q[..., 0] + 1j * q[..., 2]
    D = q[..., 1] - 1j * q[..., 3]
    c = np.fft.ifft(C, axis=1, norm="ortho")
    d = np.fft.fft(D, axis=1, norm="ortho")
    # g = c + d i  ->  g = A + B j
    A = c.real + 1j * d.real
    B = c.imag - 1j * d.imag
    a = np.fft.ifft(A, axis=0, norm="ortho")
    b = np.fft.fft(B, axis=0, norm="ortho")
    return np.stack([a.real, a.imag, b.real, b.imag], axis=-1)


def qft_forward(f: QSignal2D) -> QSignal2D:
    return QSignal2D._wrap(_fwd_arrays(f.data))


def qft_inverse(F: QSignal2D) -> QSignal2D:
    return QSignal2D._wrap(_inv_arrays(F.data))


def qft_naive(f: QSignal2D, direction: str = FORWARD) -> QSignal2D:
    """Literal direct summation of the transform, O((N1 N2)^2).

    Meant for validation on small grids (a few thousand cells at most).
    """
    if direction not in (FORWARD, INVERSE):
        raise ValueError(f"direction must be {FORWARD!r} or {INVERSE!r}")
    return QSignal2D._wrap(_kernels.naive_qft(f.data, direction == INVERSE))
