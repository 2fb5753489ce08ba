"""Zeros of paraorthogonal polynomials by inverting the Prufer phase.

``Phi_{n+1}^{(beta)}(e^{i theta}) = 0`` exactly when ``e^{i eta_n(theta)} =
conj(beta)``.  Since ``eta_n`` is strictly increasing and gains ``2(n+1)pi`` over
``[0, 2pi)``, the zeros are the solutions of ``eta_n(theta) = t_k`` for the n+1
targets ``t_k`` congruent to ``arg(conj(beta))`` in ``[eta_n(0), eta_n(0) +
2(n+1)pi)``.  Each is found by bisection, all targets advanced together as one
vectorized sweep.

``oracle_zeros`` is an independent path for small degrees: it builds the
polynomial coefficients and runs a Durand-Kerner iteration.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .opuc import check_beta, popuc_values
from .prufer import PhaseEvaluator
from .verblunsky import VerblunskyModel

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = 1e-12
ORACLE_MAX_DEGREE = 50
_MAX_BISECT = 200


class BracketError(RuntimeError):
    """A target was not bracketed by the phase pre-scan."""


class ConvergenceError(RuntimeError):
    """Simultaneous root iteration did not settle."""


@dataclass(frozen=True)
class ZeroSet:
    """Sorted zero angles of Phi_{n+1}^{(beta)} in [0, 2pi)."""

    n_plus_1: int
    beta: complex
    thetas: np.ndarray
    residuals: np.ndarray

    @property
    def n(self) -> int:
        return self.n_plus_1 - 1


def thread_count() -> int:
    """Worker cap from POPUC_THREADS (default 1)."""
    raw = os.environ.get("POPUC_THREADS", "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError("POPUC_THREADS must be a positive integer") from None
    if value < 1:
        raise ValueError("POPUC_THREADS must be a positive integer")
    return value


def _targets(ev: PhaseEvaluator, beta: complex) -> np.ndarray:
    c = math.atan2(-beta.imag, beta.real)  # arg(conj(beta))
    eta0 = ev(0.0)
    offset = (c - eta0) % TWO_PI
    return eta0 + offset + TWO_PI * np.arange(ev.n + 1)


def _bisect(ev, t, lo, hi, elo, ehi, tol):
    """Shrink [lo, hi] around eta^{-1}(t) for every entry, then interpolate once."""
    for _ in range(_MAX_BISECT):
        width = hi - lo
        if not np.any(width > tol):
            break
        mid = 0.5 * (lo + hi)
        stuck = (mid <= lo) | (mid >= hi)
        if np.all(stuck | (width <= tol)):
            break
        em = ev(mid)
        left = em <= t
        lo = np.where(left, mid, lo)
        elo = np.where(left, em, elo)
        hi = np.where(left, hi, mid)
        ehi = np.where(left, ehi, em)
    # eta is smooth and increasing, so a last secant step inside the bracket is safe
    span = ehi - elo
    frac = np.divide(t - elo, span, out=np.full_like(t, 0.5), where=span > 0)
    return lo + np.clip(frac, 0.0, 1.0) * (hi - lo)


def find_zeros(model: VerblunskyModel, n: int, beta: complex = 1.0,
               tol_theta: float = DEFAULT_TOL, workers: int | None = None) -> ZeroSet:
    """All n+1 zeros of Phi_{n+1}^{(beta)} on the unit circle.

    Targets are bracketed from a pre-scan of eta_n on 4(n+1) uniform cells, then
    refined by bisection until every bracket is narrower than ``tol_theta``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0 < tol_theta <= 1e-6:
        raise ValueError("tol_theta must lie in (0, 1e-6]")
    beta = check_beta(beta)
    ev = PhaseEvaluator(model, n)
    t = _targets(ev, beta)

    grid = np.linspace(0.0, TWO_PI, 4 * (n + 1) + 1)
    eg = np.empty_like(grid)
    eg[:-1] = ev(grid[:-1])
    # Seam value from the exact period identity.  Evaluating at 2pi directly can
    # land on the far side of a jump narrower than double resolution (e.g. a
    # repelling fixed point of the Mobius steps at z = 1).
    eg[-1] = eg[0] + TWO_PI * (n + 1)
    cell = np.clip(np.searchsorted(eg, t, side="right") - 1, 0, grid.size - 2)
    lo_ok = eg[cell] <= t
    # the last target may overshoot eta(2 pi) by rounding; that zero sits on the seam
    hi_ok = t <= eg[cell + 1] + 1e-9 * max(1.0, abs(eg[-1]))
    if not (np.all(lo_ok) and np.all(hi_ok)) or not np.all(np.diff(eg) > 0):
        bad = int(np.flatnonzero(~(lo_ok & hi_ok))[0]) if not np.all(lo_ok & hi_ok) else -1
        raise BracketError(
            f"phase pre-scan failed to bracket target {bad}: "
            f"eta(0)={eg[0]!r}, eta(2pi)={eg[-1]!r}, expected increase {TWO_PI * (n + 1)!r}, "
            f"monotone={bool(np.all(np.diff(eg) > 0))}"
        )
    lo, hi = grid[cell], grid[cell + 1]
    elo, ehi = eg[cell], eg[cell + 1]

    workers = workers or thread_count()
    if workers > 1 and t.size >= 2 * workers:
        chunks = np.array_split(np.arange(t.size), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(lambda ix: _bisect(ev, t[ix], lo[ix], hi[ix], elo[ix], ehi[ix], tol_theta),
                             chunks)
            thetas = np.concatenate(list(parts))
    else:
        thetas = _bisect(ev, t, lo, hi, elo, ehi, tol_theta)

    thetas = np.mod(thetas, TWO_PI)
    thetas[thetas >= TWO_PI - tol_theta] = 0.0
    thetas = np.sort(thetas)
    residuals = np.abs(popuc_values(ev.alphas, beta, thetas))
    return ZeroSet(n_plus_1=n + 1, beta=beta, thetas=thetas, residuals=residuals)


def count_zeros_in(model: VerblunskyModel, n: int, beta: complex, a: float, b: float) -> int:
    """Number of zeros with angle in [a, b), from phase increments alone.

    Counts the integers k with ``eta_n(a) <= arg(conj beta) + 2 pi k < eta_n(b)``.
    """
    if b < a:
        raise ValueError("count_zeros_in needs a <= b")
    if b > a + TWO_PI:
        raise ValueError("interval longer than a full period")
    if a == b:
        return 0
    beta = check_beta(beta)
    ev = PhaseEvaluator(model, n)
    c = math.atan2(-beta.imag, beta.real)
    ea, eb = ev(np.array([a, b], dtype=float))
    return int(math.ceil((eb - c) / TWO_PI) - math.ceil((ea - c) / TWO_PI))


# -- independent oracle -------------------------------------------------------

def popuc_coefficients(alphas: np.ndarray, beta: complex) -> np.ndarray:
    """Coefficients of Phi_{n+1}^{(beta)}, lowest degree first."""
    phi = np.array([1.0 + 0j])
    for a in alphas:
        star = np.conj(phi[::-1])
        phi = np.concatenate(([0j], phi)) - np.conj(a) * np.concatenate((star, [0j]))
    star = np.conj(phi[::-1])
    return np.concatenate(([0j], phi)) - np.conj(beta) * np.concatenate((star, [0j]))


def durand_kerner(coeffs: np.ndarray, radius: float, tol: float = 1e-13,
                  max_sweeps: int = 10_000) -> np.ndarray:
    """All roots of the monic polynomial with ascending ``coeffs``.

    Starts from points equally spaced on ``|z| = radius`` (rotated off the real
    axis) and applies the simultaneous Weierstrass update until the largest step
    falls below ``tol``.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    deg = coeffs.size - 1
    if deg < 1:
        return np.empty(0, dtype=complex)
    if abs(coeffs[-1] - 1.0) > 1e-12:
        raise ValueError("durand_kerner expects a monic polynomial")
    desc = coeffs[::-1]
    z = radius * np.exp(1j * (TWO_PI * np.arange(deg) / deg + 0.4))
    for _ in range(max_sweeps):
        p = np.polyval(desc, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        step = p / np.prod(diff, axis=1)
        z = z - step
        if np.max(np.abs(step)) < tol:
            return z
    raise ConvergenceError(f"Durand-Kerner did not converge in {max_sweeps} sweeps (degree {deg})")


def oracle_zeros(model: VerblunskyModel, n: int, beta: complex = 1.0) -> ZeroSet:
    """Zeros of Phi_{n+1}^{(beta)} from explicit coefficients, for n <= 50."""
    if not 0 <= n <= ORACLE_MAX_DEGREE:
        raise ValueError(f"oracle_zeros supports 0 <= n <= {ORACLE_MAX_DEGREE}")
    beta = check_beta(beta)
    alphas = model.coefficients(n)
    coeffs = popuc_coefficients(alphas, beta)
    radius = 1.0 + (float(np.max(np.abs(alphas))) if n else 0.0)
    roots = durand_kerner(coeffs, radius)
    thetas = np.sort(np.mod(np.angle(roots), TWO_PI))
    thetas[thetas >= TWO_PI] = 0.0
    thetas = np.sort(thetas)
    residuals = np.abs(popuc_values(alphas, beta, thetas))
    return ZeroSet(n_plus_1=n + 1, beta=beta, thetas=thetas, residuals=residuals)
