"""Space- and frequency-limiting operators and their kernels.

With ``S_T`` the spatial mask and ``F_W`` the band projection, the product
``F_W S_T`` is the integral operator

    (F_W S_T f)(x) = sum_{t in T} f(t) k(t, x)
    k(t, x) = 1/N sum_{w in W} e^{-i t1 w1} e^{-j t2 w2} e^{j x2 w2} e^{i x1 w1}

with ``w = 2pi m / N`` on each axis.  Because the transform is unitary its
Hilbert-Schmidt norm is ``sqrt(|T| |W| / N)``, N the number of grid cells.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dqft import qft_forward, qft_inverse
from .errors import ShapeError, SpecError
from .quaternion import Quaternion, exp_i, exp_j, qabs2, qmul
from .signal import Mask, QSignal2D, apply_mask

__all__ = [
    "LimitingPair",
    "space_limit",
    "freq_limit",
    "compose_STFW",
    "compose_FWST",
    "kernel_eval",
    "kernel_matrix",
    "kernel_apply",
    "kernel_rect_sinc",
    "kernel_disc",
    "hs_norm",
    "hs_norm_bruteforce",
    "op_norm_estimate",
]


@dataclass(frozen=True, eq=False)
class LimitingPair:
    """Spatial set T and frequency set W on a common grid."""

    t_mask: Mask
    w_mask: Mask

    def __post_init__(self):
        if self.t_mask.shape != self.w_mask.shape:
            raise ShapeError(f"shape: T is {self.t_mask.shape}, W is {self.w_mask.shape}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.t_mask.shape

    @property
    def rows(self) -> int:
        return self.t_mask.rows

    @property
    def cols(self) -> int:
        return self.t_mask.cols

    @property
    def n_px(self) -> int:
        return self.rows * self.cols

    @property
    def tw_product(self) -> int:
        return self.t_mask.count * self.w_mask.count

    @property
    def rho(self) -> float:
        return hs_norm(self)

    def _check(self, f: QSignal2D) -> None:
        if f.shape != self.shape:
            raise ShapeError(f"shape: signal {f.shape}, masks {self.shape}")


def space_limit(f: QSignal2D, pair: LimitingPair) -> QSignal2D:
    pair._check(f)
    return apply_mask(f, pair.t_mask)


def freq_limit(f: QSignal2D, pair: LimitingPair) -> QSignal2D:
    pair._check(f)
    return qft_inverse(apply_mask(qft_forward(f), pair.w_mask))


def compose_STFW(f: QSignal2D, pair: LimitingPair) -> QSignal2D:
    """``S_T F_W f``, the operator iterated by the recovery algorithm."""
    return space_limit(freq_limit(f, pair), pair)


def compose_FWST(f: QSignal2D, pair: LimitingPair) -> QSignal2D:
    """``F_W S_T f``; the real-inner-product adjoint of :func:`compose_STFW`."""
    return freq_limit(space_limit(f, pair), pair)


def _cell(pair, idx, name):
    r, c = (int(v) for v in idx)
    if not (0 <= r < pair.rows and 0 <= c < pair.cols):
        raise IndexError(f"{name}={idx} outside {pair.rows}x{pair.cols} grid")
    return r, c


def kernel_eval(pair: LimitingPair, t, x) -> Quaternion:
    """k(t, x) of ``F_W S_T``; zero when ``t`` is not in T."""
    t = _cell(pair, t, "t")
    x = _cell(pair, x, "x")
    if not pair.t_mask.members[t]:
        return Quaternion()
    k = _kernels.kernel_table([t], [x], pair.w_mask.cells(), pair.rows, pair.cols)
    return Quaternion.from_array(k[0, 0])


def _all_cells(rows, cols):
    return np.argwhere(np.ones((rows, cols), bool))


def kernel_matrix(pair: LimitingPair, t_cells=None, x_cells=None) -> np.ndarray:
    """Unrestricted kernel values ``k(t, x)`` as a ``(len(t), len(x), 4)`` array.

    Defaults to every grid cell for both arguments.  The ``t in T`` restriction
    is not applied here.
    """
    allc = _all_cells(pair.rows, pair.cols)
    t_cells = allc if t_cells is None else np.asarray(t_cells).reshape(-1, 2)
    x_cells = allc if x_cells is None else np.asarray(x_cells).reshape(-1, 2)
    return _kernels.kernel_table(t_cells, x_cells, pair.w_mask.cells(), pair.rows, pair.cols)


def kernel_apply(f: QSignal2D, pair: LimitingPair, restrict_output: bool = True) -> QSignal2D:
    """``chi_T(x) sum_t f(t) k(t, x)`` by explicit summation (O(N^2 |W|)).

    With ``restrict_output=False`` this is ``F_W f`` computed from the kernel.
    """
    pair._check(f)
    K = kernel_matrix(pair)  # [t, x]
    flat = f.data.reshape(-1, 4)
    out = qmul(flat[:, None, :], K).sum(axis=0).reshape(pair.rows, pair.cols, 4)
    if restrict_output:
        out = np.where(pair.t_mask.members[..., None], out, 0.0)
    return QSignal2D._wrap(out)


def _rect_omega(pair: LimitingPair):
    spec = pair.w_mask.spec
    if spec is None or spec.kind != "centered-rect":
        raise SpecError("spec: sinc kernel needs a centered-rect band")
    h1, h2 = spec.params
    return math.pi * (2 * h1 + 1) / pair.rows, math.pi * (2 * h2 + 1) / pair.cols


def _sinc(u, omega):
    if u == 0.0:
        return omega / math.pi
    return math.sin(omega * u) / (math.pi * u)


def kernel_rect_sinc(pair: LimitingPair, t, x, omega=None) -> Quaternion:
    """Continuous separable sinc kernel ``sinc_W(t - x)`` of a rectangular band.

    ``omega`` defaults to the band edge of the discrete centered rectangle,
    ``pi (2 h + 1) / N`` per axis, for which the N-periodic sum of sinc
    translates reproduces the discrete kernel exactly.  A scalar ``omega``
    applies to both axes.  The set T plays no role here.
    """
    default = _rect_omega(pair)
    if omega is None:
        om1, om2 = default
    elif np.ndim(omega) == 0:
        om1 = om2 = float(omega)
    else:
        om1, om2 = (float(v) for v in omega)
    u1 = float(t[0]) - float(x[0])
    u2 = float(t[1]) - float(x[1])
    return Quaternion(_sinc(u1, om1) * _sinc(u2, om2))


def _disc_quadrature(t, x, upper, n_r, n_theta):
    nodes, weights = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * upper * (nodes + 1.0)
    wr = 0.5 * upper * weights
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    wt = 2.0 * math.pi / n_theta
    R, TH = np.meshgrid(r, theta, indexing="ij")
    rc, rs = R * np.cos(TH), R * np.sin(TH)
    val = qmul(qmul(exp_i(-t[0] * rc), exp_j((x[1] - t[1]) * rs)), exp_i(x[0] * rc))
    val = val * (R * wr[:, None] * wt)[..., None]
    return val.sum(axis=(0, 1)) / (2.0 * math.pi) ** 2


def kernel_disc(radius: float, t, x, corrected: bool = False, tol: float = 1e-10, max_nodes: int = 4096) -> Quaternion:
    """Continuous kernel of a disc band centred at the origin, by quadrature.

    The integrand is ``e^{-i t1 r cos th} e^{j (x2 - t2) r sin th} e^{i x1 r cos th} r``
    over ``th in [0, 2pi]`` and ``r in [0, 1]``.  With the unit upper limit the
    result does not depend on ``radius``; ``corrected=True`` integrates ``r``
    up to ``radius`` instead.

    Gauss-Legendre in ``r`` and the periodic trapezoid rule in ``th``; node
    counts are doubled until successive results differ by less than ``tol``.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    t = (float(t[0]), float(t[1]))
    x = (float(x[0]), float(x[1]))
    upper = float(radius) if corrected else 1.0
    # oscillation scale decides the starting resolution
    scale = upper * (abs(t[0]) + abs(x[0]) + abs(x[1] - t[1])) + 1.0
    n_r = max(16, int(4 * scale))
    n_theta = max(32, int(8 * scale))
    prev = _disc_quadrature(t, x, upper, n_r, n_theta)
    while True:
        n_r *= 2
        n_theta *= 2
        cur = _disc_quadrature(t, x, upper, n_r, n_theta)
        if np.max(np.abs(cur - prev)) < tol:
            return Quaternion.from_array(cur)
        if n_theta > max_nodes:
            raise RuntimeError(f"disc kernel quadrature did not settle for t={t}, x={x}")
        prev = cur


def hs_norm_bruteforce(pair: LimitingPair, order: str = "FW_ST") -> float:
    """Hilbert-Schmidt norm from explicit kernel sums.

    ``order="FW_ST"`` sums ``|k(t, x)|^2`` over ``t in T`` and every ``x``;
    ``order="ST_FW"`` sums over every ``t`` and ``x in T``.  The two tables are
    computed separately.
    """
    tc = pair.t_mask.cells()
    if len(tc) == 0 or pair.w_mask.count == 0:
        return 0.0
    if order == "FW_ST":
        K = kernel_matrix(pair, t_cells=tc)
    elif order == "ST_FW":
        K = kernel_matrix(pair, x_cells=tc)
    else:
        raise ValueError(f"order must be 'FW_ST' or 'ST_FW', got {order!r}")
    return math.sqrt(float(qabs2(K).sum()))


def hs_norm(pair: LimitingPair, verify: bool = False, atol: float = 1e-9) -> float:
    """``sqrt(|T| |W| / N)``.

    ``verify=True`` also computes both brute-force sums on grids up to 12x12
    and raises ``ArithmeticError`` if either disagrees beyond ``atol``.
    """
    value = math.sqrt(pair.t_mask.count * pair.w_mask.count / pair.n_px)
    if verify and pair.n_px <= 144:
        for order in ("FW_ST", "ST_FW"):
            bf = hs_norm_bruteforce(pair, order)
            if abs(bf - value) > atol:
                raise ArithmeticError(f"HS norm mismatch ({order}): closed form {value!r}, brute force {bf!r}")
    return value


def _seed_vector(rows, cols):
    k = np.arange(rows * cols * 4, dtype=float).reshape(rows, cols, 4)
    return 1.0 + 1e-3 * np.sin(0.7548776662466927 * k + 0.5)


def op_norm_estimate(pair: LimitingPair, iterations: int = 50) -> float:
    """Power-iteration lower bound on the operator norm of ``S_T F_W``.

    Works on the real coordinate space of the grid, where both projections
    are symmetric, so ``A* A = F_W S_T F_W``.  Deterministic start vector.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    g = QSignal2D._wrap(_seed_vector(pair.rows, pair.cols))
    g = g / g.norm()
    best = 0.0
    for _ in range(iterations):
        h = compose_STFW(g, pair)
        est = h.norm()
        best = max(best, est)
        g = freq_limit(space_limit(h, pair), pair)
        n = g.norm()
        if n == 0.0:
            break
        g = g / n
    return best
