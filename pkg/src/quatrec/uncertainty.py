"""Concentration of a signal on a set T and of its spectrum on a band W.

For unit-energy ``f`` with spatial tail ``eps_t`` and spectral tail ``eps_w``
the discrete bound reads::

    |T| |W| / N >= max(0, 1 - eps_t - eps_w)^2
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dqft import qft_forward
from .errors import DegenerateSignalError
from .limiting import LimitingPair, freq_limit, space_limit
from .signal import Mask, QSignal2D, apply_mask

__all__ = [
    "ConcentrationReport",
    "concentration",
    "check_uncertainty",
    "corollary_support",
    "random_trial",
    "BOUND_TOL",
]

BOUND_TOL = 1e-9


@dataclass(frozen=True)
class ConcentrationReport:
    eps_t: float
    eps_w: float
    t_count: int
    w_count: int
    n_px: int

    @property
    def bound_lhs(self) -> float:
        return self.t_count * self.w_count / self.n_px

    @property
    def bound_rhs(self) -> float:
        return max(0.0, 1.0 - self.eps_t - self.eps_w) ** 2

    @property
    def margin(self) -> float:
        return self.bound_lhs - self.bound_rhs


def _tail(g: QSignal2D, mask) -> float:
    # the best approximant vanishing off the set is the masked signal itself
    return (g - apply_mask(g, mask)).norm()


def concentration(f: QSignal2D, pair: LimitingPair) -> ConcentrationReport:
    """Tails of ``f / ||f||`` outside T and of its spectrum outside W."""
    pair._check(f)
    norm = f.norm()
    if norm == 0.0:
        raise DegenerateSignalError("degenerate: zero signal has no concentration")
    u = f / norm
    return ConcentrationReport(
        eps_t=_tail(u, pair.t_mask),
        eps_w=_tail(qft_forward(u), pair.w_mask),
        t_count=pair.t_mask.count,
        w_count=pair.w_mask.count,
        n_px=pair.n_px,
    )


def check_uncertainty(report: ConcentrationReport, tol: float = BOUND_TOL) -> tuple[bool, float]:
    """Return ``(holds, margin)`` where margin is ``lhs - rhs``."""
    margin = report.margin
    return bool(margin >= -tol), margin


def corollary_support(f: QSignal2D, pair: LimitingPair, tol: float = 1e-10) -> bool:
    """Exact support case: if both tails vanish then ``|T| |W| >= N``.

    Returns ``True`` when the premise fails (nothing to check).
    """
    rep = concentration(f, pair)
    if rep.eps_t < tol and rep.eps_w < tol:
        return rep.t_count * rep.w_count >= rep.n_px
    return True


def random_trial(rows: int, cols: int, rng: np.random.Generator):
    """Draw one ``(f, pair)`` for a Monte-Carlo sweep.

    Mixes unstructured draws with signals built to be concentrated (spatially
    supported, bandlimited, or in the range of ``F_W S_T``) so that many
    trials land near the bound instead of trivially satisfying it.
    """
    def rand_mask(p_block=0.6):
        if rng.random() < p_block:
            h = int(rng.integers(1, rows + 1))
            w = int(rng.integers(1, cols + 1))
            r0 = int(rng.integers(0, rows - h + 1))
            c0 = int(rng.integers(0, cols - w + 1))
            m = np.zeros((rows, cols), bool)
            m[r0:r0 + h, c0:c0 + w] = True
            return Mask(m)
        return Mask(rng.random((rows, cols)) < rng.uniform(0.02, 0.9))

    pair = LimitingPair(rand_mask(), rand_mask())
    kind = int(rng.integers(0, 4))
    g = QSignal2D.random(rows, cols, rng)
    if kind == 1:
        g = space_limit(g, pair)
    elif kind == 2:
        g = freq_limit(g, pair)
    elif kind == 3:
        g = freq_limit(space_limit(g, pair), pair)
    if g.norm() < 1e-12:
        g = QSignal2D.random(rows, cols, rng)
    return g, pair
