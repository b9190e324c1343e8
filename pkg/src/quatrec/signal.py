"""Quaternion-valued 2D grids and boolean masks on them."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError, SpecError
from .quaternion import Quaternion, qabs2, qconj, qmul

__all__ = [
    "QSignal2D",
    "Mask",
    "MaskSpec",
    "l2_norm",
    "inner_product",
    "apply_mask",
    "mask_from_spec",
    "signed_index",
    "parse_mask_spec",
]


class QSignal2D:
    """An ``rows x cols`` grid of quaternions.

    The backing array has shape ``(rows, cols, 4)`` and is read-only; every
    operation returns a new signal.
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64, copy=True)
        if arr.ndim == 2:
            # real grid -> scalar part
            full = np.zeros(arr.shape + (4,))
            full[..., 0] = arr
            arr = full
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise ShapeError(f"shape: expected (rows, cols, 4), got {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ShapeError(f"shape: empty grid {arr.shape[:2]}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("signal contains non-finite values")
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "QSignal2D":
        # internal: skip the copy for freshly computed arrays
        obj = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.float64)
        arr.setflags(write=False)
        obj._data = arr
        return obj

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QSignal2D":
        return cls._wrap(np.zeros((rows, cols, 4)))

    @classmethod
    def from_components(cls, w=None, x=None, y=None, z=None) -> "QSignal2D":
        parts = [w, x, y, z]
        shape = next(np.shape(p) for p in parts if p is not None)
        arr = np.zeros(tuple(shape) + (4,))
        for k, p in enumerate(parts):
            if p is not None:
                arr[..., k] = p
        return cls(arr)

    @classmethod
    def random(cls, rows: int, cols: int, rng=None) -> "QSignal2D":
        rng = np.random.default_rng(rng)
        return cls._wrap(rng.standard_normal((rows, cols, 4)))

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape[:2]

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def n_px(self) -> int:
        return self.rows * self.cols

    def __getitem__(self, idx) -> Quaternion:
        r, c = idx
        return Quaternion.from_array(self._data[r, c])

    def component(self, k: int) -> np.ndarray:
        return self._data[..., k]

    def norm(self) -> float:
        return l2_norm(self)

    def conj(self) -> "QSignal2D":
        return QSignal2D._wrap(qconj(self._data))

    def _check(self, other: "QSignal2D"):
        if not isinstance(other, QSignal2D):
            return NotImplemented
        if other.shape != self.shape:
            raise ShapeError(f"shape: {self.shape} vs {other.shape}")
        return None

    def __add__(self, other):
        bad = self._check(other)
        if bad is NotImplemented:
            return bad
        return QSignal2D._wrap(self._data + other._data)

    def __sub__(self, other):
        bad = self._check(other)
        if bad is NotImplemented:
            return bad
        return QSignal2D._wrap(self._data - other._data)

    def __neg__(self):
        return QSignal2D._wrap(-self._data)

    def __mul__(self, other):
        # right multiplication by a real or a quaternion constant
        if isinstance(other, (int, float, np.floating)):
            return QSignal2D._wrap(self._data * float(other))
        if isinstance(other, Quaternion):
            return QSignal2D._wrap(qmul(self._data, other.to_array()))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating)):
            return QSignal2D._wrap(self._data * float(other))
        if isinstance(other, Quaternion):
            return QSignal2D._wrap(qmul(other.to_array(), self._data))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating)):
            return QSignal2D._wrap(self._data / float(other))
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, QSignal2D):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def allclose(self, other: "QSignal2D", atol: float = 1e-10) -> bool:
        return self.shape == other.shape and bool(np.allclose(self._data, other._data, rtol=0, atol=atol))

    def __repr__(self):
        return f"QSignal2D(rows={self.rows}, cols={self.cols}, norm={self.norm():.6g})"


@dataclass(frozen=True)
class MaskSpec:
    """Encoding of a measurable set on the grid, in cell units.

    ``kind`` is one of ``block``, ``centered-rect``, ``disc``, ``explicit``:

    * ``block``: ``(row0, col0, height, width)``
    * ``centered-rect``: ``(half_height, half_width)`` in signed-frequency
      indices, i.e. ``-half..half`` with wraparound
    * ``disc``: ``(center_row, center_col, radius)``; distance is measured on
      the periodic grid, so ``disc(0, 0, r)`` is a low-pass disc
    * ``explicit``: a tuple of ``(row, col)`` cells
    """

    kind: str
    params: tuple = ()

    @classmethod
    def block(cls, row0, col0, height, width):
        return cls("block", (int(row0), int(col0), int(height), int(width)))

    @classmethod
    def centered_rect(cls, half_height, half_width):
        return cls("centered-rect", (int(half_height), int(half_width)))

    @classmethod
    def disc(cls, center_row, center_col, radius):
        return cls("disc", (int(center_row), int(center_col), float(radius)))

    @classmethod
    def explicit(cls, cells):
        return cls("explicit", tuple((int(r), int(c)) for r, c in cells))

    @classmethod
    def full(cls, rows, cols):
        return cls.block(0, 0, rows, cols)

    def __str__(self):
        if self.kind == "explicit":
            return "explicit:" + ";".join(f"{r},{c}" for r, c in self.params)
        return self.kind + ":" + ",".join(_fmt(p) for p in self.params)


def _fmt(p):
    return repr(p) if isinstance(p, float) else str(p)


def parse_mask_spec(text: str) -> MaskSpec:
    """Parse ``kind:args`` strings, e.g. ``block:0,0,4,4`` or ``explicit:0,0;1,1``.

    ``none`` and ``empty`` give the empty set.
    """
    text = text.strip()
    if text in ("none", "empty"):
        return MaskSpec("explicit", ())
    kind, sep, rest = text.partition(":")
    kind = kind.strip().lower().replace("_", "-")
    if not sep:
        raise SpecError(f"spec: missing ':' in {text!r}")
    try:
        if kind == "explicit":
            cells = [c for c in rest.split(";") if c.strip()]
            return MaskSpec.explicit(tuple(int(v) for v in c.split(",")) for c in cells)
        vals = [v.strip() for v in rest.split(",")]
        if kind == "block" and len(vals) == 4:
            return MaskSpec.block(*map(int, vals))
        if kind in ("centered-rect", "rect") and len(vals) in (1, 2):
            h = int(vals[0])
            return MaskSpec.centered_rect(h, int(vals[1]) if len(vals) == 2 else h)
        if kind == "disc" and len(vals) == 3:
            return MaskSpec.disc(int(vals[0]), int(vals[1]), float(vals[2]))
    except ValueError as exc:
        raise SpecError(f"spec: cannot parse {text!r}: {exc}") from None
    raise SpecError(f"spec: unknown or malformed mask spec {text!r}")


@dataclass(frozen=True, eq=False)
class Mask:
    """Boolean membership grid (a set T or W) with its pixel count."""

    members: np.ndarray
    spec: MaskSpec | None = field(default=None)

    def __post_init__(self):
        m = np.array(self.members, dtype=bool, copy=True)
        if m.ndim != 2:
            raise ShapeError(f"shape: mask must be 2D, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "members", m)

    @classmethod
    def full(cls, rows, cols):
        return cls(np.ones((rows, cols), bool), MaskSpec.full(rows, cols))

    @classmethod
    def empty(cls, rows, cols):
        return cls(np.zeros((rows, cols), bool), MaskSpec("explicit", ()))

    @property
    def shape(self) -> tuple[int, int]:
        return self.members.shape

    @property
    def rows(self) -> int:
        return self.members.shape[0]

    @property
    def cols(self) -> int:
        return self.members.shape[1]

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.members))

    def cells(self) -> np.ndarray:
        """``(count, 2)`` array of member indices in row-major order."""
        return np.argwhere(self.members)

    def complement(self) -> "Mask":
        return Mask(~self.members)

    def __contains__(self, cell) -> bool:
        r, c = cell
        return bool(self.members[r, c])

    def __eq__(self, other):
        if not isinstance(other, Mask):
            return NotImplemented
        return np.array_equal(self.members, other.members)

    __hash__ = None

    def __repr__(self):
        return f"Mask({self.rows}x{self.cols}, count={self.count}, spec={self.spec})"


def signed_index(n: int) -> np.ndarray:
    """Signed frequency of each natural index ``0..n-1`` (``m - n`` for ``m >= n/2``)."""
    m = np.arange(n)
    return np.where(m >= n / 2, m - n, m)


def mask_from_spec(spec: MaskSpec, rows: int, cols: int) -> Mask:
    if rows < 1 or cols < 1:
        raise SpecError(f"spec: bad grid {rows}x{cols}")
    members = np.zeros((rows, cols), dtype=bool)
    kind, p = spec.kind, spec.params
    if kind == "block":
        r0, c0, h, w = p
        if h < 0 or w < 0 or r0 < 0 or c0 < 0 or r0 + h > rows or c0 + w > cols:
            raise SpecError(f"spec: block {p} does not fit {rows}x{cols}")
        members[r0:r0 + h, c0:c0 + w] = True
    elif kind == "centered-rect":
        hh, hw = p
        if hh < 0 or hw < 0 or 2 * hh + 1 > rows or 2 * hw + 1 > cols:
            raise SpecError(f"spec: centered-rect half sizes {p} do not fit {rows}x{cols}")
        rr = np.abs(signed_index(rows)) <= hh
        cc = np.abs(signed_index(cols)) <= hw
        members = np.logical_and.outer(rr, cc)
    elif kind == "disc":
        r0, c0, rad = p
        if not (0 <= r0 < rows and 0 <= c0 < cols) or rad < 0:
            raise SpecError(f"spec: disc {p} does not fit {rows}x{cols}")
        if 2 * rad >= rows or 2 * rad >= cols:
            raise SpecError(f"spec: disc radius {rad} wraps around {rows}x{cols}")
        dr = (np.arange(rows) - r0) % rows
        dr = np.minimum(dr, rows - dr)
        dc = (np.arange(cols) - c0) % cols
        dc = np.minimum(dc, cols - dc)
        members = dr[:, None] ** 2 + dc[None, :] ** 2 <= rad * rad
    elif kind == "explicit":
        for r, c in p:
            if not (0 <= r < rows and 0 <= c < cols):
                raise SpecError(f"spec: cell {(r, c)} outside {rows}x{cols}")
            members[r, c] = True
    else:
        raise SpecError(f"spec: unknown mask kind {kind!r}")
    return Mask(members, spec)


def _check_shape(f: QSignal2D, g) -> None:
    if f.shape != g.shape:
        raise ShapeError(f"shape: {f.shape} vs {g.shape}")


def l2_norm(f: QSignal2D) -> float:
    """Unnormalized energy norm ``sqrt(sum |f[n]|^2)``."""
    return float(np.sqrt(np.sum(f.data * f.data)))


def inner_product(f: QSignal2D, g: QSignal2D) -> Quaternion:
    """``sum f[n] conj(g[n])``."""
    _check_shape(f, g)
    s = qmul(f.data, qconj(g.data)).sum(axis=(0, 1))
    return Quaternion.from_array(s)


def apply_mask(f: QSignal2D, m: Mask) -> QSignal2D:
    _check_shape(f, m)
    return QSignal2D._wrap(np.where(m.members[..., None], f.data, 0.0))


def energy(f: QSignal2D) -> float:
    return float(qabs2(f.data).sum())
