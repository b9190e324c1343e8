"""Hamilton quaternions.

Scalar values use the :class:`Quaternion` value type.  Grids of quaternions
are plain float arrays whose last axis holds the ``(w, x, y, z)`` components;
:func:`qmul` and :func:`qconj` work on those.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Quaternion",
    "mul",
    "conj",
    "modulus",
    "qmul",
    "qconj",
    "qabs2",
    "exp_i",
    "exp_j",
    "ONE",
    "I",
    "J",
    "K",
]


@dataclass(frozen=True)
class Quaternion:
    """q = w + x i + y j + z k."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.asarray(a, dtype=float)
        if a.shape != (4,):
            raise ValueError(f"expected 4 components, got shape {a.shape}")
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=float)

    @property
    def scalar(self) -> float:
        return self.w

    @property
    def vector(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def modulus(self) -> float:
        return math.sqrt(self.norm2())

    __abs__ = modulus

    def isclose(self, other: "Quaternion", atol: float = 1e-12) -> bool:
        return (self - other).modulus() <= atol

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Quaternion(float(other))
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Quaternion(float(other))
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        # reals commute with everything
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w / other, self.x / other, self.y / other, self.z / other)
        return NotImplemented

    def __repr__(self):
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``.

    Written as scalar/vector parts: ``p0 q0 - p.q + p0 qv + q0 pv + pv x qv``.
    """
    p0, p1, p2, p3 = p.w, p.x, p.y, p.z
    q0, q1, q2, q3 = q.w, q.x, q.y, q.z
    return Quaternion(
        p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
        p0 * q1 + q0 * p1 + (p2 * q3 - p3 * q2),
        p0 * q2 + q0 * p2 + (p3 * q1 - p1 * q3),
        p0 * q3 + q0 * p3 + (p1 * q2 - p2 * q1),
    )


def conj(q: Quaternion) -> Quaternion:
    return q.conj()


def modulus(q: Quaternion) -> float:
    return q.modulus()


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def qmul(a, b) -> np.ndarray:
    """Elementwise Hamilton product of two broadcastable ``(..., 4)`` arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qconj(a) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def qabs2(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return np.einsum("...k,...k->...", a, a)


def exp_i(theta) -> np.ndarray:
    """``e^{i theta}`` as ``(..., 4)`` array."""
    theta = np.asarray(theta, dtype=float)
    out = np.zeros(theta.shape + (4,))
    out[..., 0] = np.cos(theta)
    out[..., 1] = np.sin(theta)
    return out


def exp_j(phi) -> np.ndarray:
    """``e^{j phi}`` as ``(..., 4)`` array."""
    phi = np.asarray(phi, dtype=float)
    out = np.zeros(phi.shape + (4,))
    out[..., 0] = np.cos(phi)
    out[..., 2] = np.sin(phi)
    return out
