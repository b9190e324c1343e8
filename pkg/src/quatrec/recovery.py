"""Recovery of a bandlimited signal from observations with a missing region.

The receiver sees ``r = f + n`` off T and zero on T, and knows that the
spectrum of ``f`` lives in W.  Whenever ``|T| |W| < N`` the operator
``I - S_T F_W`` is invertible and the Neumann iteration

    s0 = r,    s_{k+1} = r + S_T F_W s_k

converges geometrically (ratio at most ``rho = sqrt(|T||W|/N)``) to
``(I - S_T F_W)^{-1} r``.  The error against the noiseless ``f`` is at most
``||n|| / (1 - rho)``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotBandlimitedError, ShapeError
from .limiting import LimitingPair, compose_STFW, freq_limit, hs_norm, space_limit
from .signal import QSignal2D

__all__ = [
    "RecoveryProblem",
    "RecoveryReport",
    "simulate_received",
    "recover",
    "uniqueness_certificate",
    "error_bound_c",
    "make_noise",
    "default_max_iters",
]

log = logging.getLogger(__name__)

DEFAULT_REL_TOL = 1e-9
NO_GUARANTEE_ITERS = 10000


def uniqueness_certificate(pair: LimitingPair) -> bool:
    """Strict discrete uniqueness condition ``|T| |W| < N``."""
    return pair.tw_product < pair.n_px


def error_bound_c(pair: LimitingPair) -> float | None:
    """``1 / (1 - rho)`` when ``rho < 1``, else ``None``."""
    if not uniqueness_certificate(pair):
        return None
    return 1.0 / (1.0 - hs_norm(pair))


def default_max_iters(rho: float, rel_tol: float = DEFAULT_REL_TOL) -> int:
    if rho >= 1.0:
        return NO_GUARANTEE_ITERS
    if rho == 0.0:
        return 1
    return max(1, 10 * math.ceil(math.log(rel_tol) / math.log(rho)))


@dataclass(frozen=True, eq=False)
class RecoveryProblem:
    received: QSignal2D
    pair: LimitingPair
    noise_norm: float = 0.0
    max_iters: int | None = None
    tol: float | None = None

    def __post_init__(self):
        if self.received.shape != self.pair.shape:
            raise ShapeError(f"shape: received {self.received.shape}, masks {self.pair.shape}")
        on_t = self.received.data[self.pair.t_mask.members]
        if np.any(on_t != 0.0):
            raise ValueError("received signal must be zero on the missing region T")
        if self.noise_norm < 0:
            raise ValueError("noise_norm must be nonnegative")
        if self.max_iters is None:
            object.__setattr__(self, "max_iters", default_max_iters(self.rho))
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tol is None:
            object.__setattr__(self, "tol", DEFAULT_REL_TOL * self.received.norm())
        if self.tol < 0:
            raise ValueError("tol must be nonnegative")

    @property
    def rho(self) -> float:
        return hs_norm(self.pair)

    @property
    def guaranteed(self) -> bool:
        return uniqueness_certificate(self.pair)


@dataclass
class RecoveryReport:
    recovered: QSignal2D
    iterations_run: int
    residual_history: list[float]
    rho: float
    error_bound_c: float | None
    converged: bool
    guaranteed: bool
    # ||s_k - f|| for k = 0..iterations_run when ground truth was supplied
    error_history: list[float] | None = field(default=None)

    @property
    def final_error(self) -> float | None:
        return self.error_history[-1] if self.error_history else None


def make_noise(rows: int, cols: int, level: float, seed=None) -> QSignal2D:
    """Gaussian quaternion noise rescaled to norm exactly ``level``."""
    rng = np.random.default_rng(seed)
    n = rng.standard_normal((rows, cols, 4))
    if level == 0.0:
        return QSignal2D.zeros(rows, cols)
    return QSignal2D._wrap(n * (level / np.sqrt(np.sum(n * n))))


def simulate_received(f: QSignal2D, pair: LimitingPair, noise: QSignal2D | None = None,
                      max_iters: int | None = None, tol: float | None = None,
                      band_tol: float = 1e-8) -> RecoveryProblem:
    """Build the observation ``r = f + n`` off T, ``0`` on T."""
    pair._check(f)
    leak = (f - freq_limit(f, pair)).norm()
    if leak >= band_tol * max(1.0, f.norm()):
        raise NotBandlimitedError(f"not-bandlimited: energy {leak:.3e} outside W")
    if noise is None:
        noisy, nn = f, 0.0
    else:
        pair._check(noise)
        noisy, nn = f + noise, noise.norm()
    r = noisy - space_limit(noisy, pair)
    return RecoveryProblem(r, pair, nn, max_iters, tol)


def recover(problem: RecoveryProblem, truth: QSignal2D | None = None) -> RecoveryReport:
    """Run the Neumann iteration until successive iterates differ by < tol."""
    pair = problem.pair
    r = problem.received
    rho = problem.rho
    if not problem.guaranteed:
        log.warning("|T||W| = %d >= N = %d: no convergence guarantee", pair.tw_product, pair.n_px)
    s = r
    residuals: list[float] = []
    errors = None if truth is None else [(s - truth).norm()]
    converged = False
    it = 0
    while it < problem.max_iters:
        nxt = r + compose_STFW(s, pair)
        it += 1
        res = (nxt - s).norm()
        residuals.append(res)
        s = nxt
        if errors is not None:
            errors.append((s - truth).norm())
        if res < problem.tol or res == 0.0:
            converged = True
            break
    log.debug("recovery stopped after %d iterations, last residual %.3e", it, residuals[-1] if residuals else 0.0)
    return RecoveryReport(
        recovered=s,
        iterations_run=it,
        residual_history=residuals,
        rho=rho,
        error_bound_c=error_bound_c(pair),
        converged=converged,
        guaranteed=problem.guaranteed,
        error_history=errors,
    )
