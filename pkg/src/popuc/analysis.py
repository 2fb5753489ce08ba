"""Zero spacing statistics and counting-measure weights.

Indexing: a ``ZeroSet`` holds the n+1 zeros of Phi_{n+1}^{(beta)}, built from
alpha_0..alpha_{n-1}.  The counting measure nu_n is built from the n zeros of
Phi_n^{(beta)}, i.e. ``find_zeros(model, n - 1, beta)``;
``counting_measure`` is the one place that shift happens.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .verblunsky import VerblunskyModel, cesaro_mean, decreasing_rearrangement, lp_norm
from .zeros import DEFAULT_TOL, ZeroSet, find_zeros

TWO_PI = 2.0 * math.pi


class SlowDecayWarning(UserWarning):
    """Coefficients do not look like they tend to zero."""


@dataclass(frozen=True)
class SpacingReport:
    n_plus_1: int
    max_gap: float
    min_gap: float
    gaps: np.ndarray
    scaled_p: float | None = None
    scaled_f: float | None = None


@dataclass(frozen=True)
class CountingMeasure:
    n: int
    thetas: np.ndarray

    @classmethod
    def from_zeros(cls, zeros: ZeroSet) -> CountingMeasure:
        return cls(n=zeros.n_plus_1, thetas=zeros.thetas)


@dataclass(frozen=True)
class MeasureReport:
    phi: float
    delta: float
    weight: float
    band_low: float
    band_high: float
    r: float

    @property
    def violation(self) -> float:
        """Distance of the weight outside the unclipped band [D/2pi - r, D/2pi + r]."""
        center = self.delta / TWO_PI
        return max(0.0, center - self.r - self.weight, self.weight - center - self.r)


@dataclass(frozen=True)
class SweepRow:
    n: int
    max_gap: float
    scaled: float
    lp_norm: float


def gaps_of(thetas: np.ndarray) -> np.ndarray:
    """Consecutive differences, closing with theta_1 + 2pi - theta_last."""
    thetas = np.asarray(thetas, dtype=float)
    return np.diff(np.append(thetas, thetas[0] + TWO_PI))


def spacing_report(zeros: ZeroSet, p: float | None = None,
                   f_at_n: float | None = None) -> SpacingReport:
    """Gap statistics of a zero set.

    ``scaled_p`` is ``n^{1/p} * max_gap`` and ``scaled_f`` is
    ``(n / f(n)) * max_gap`` where n = n_plus_1 - 1 is the degree index.
    """
    gaps = gaps_of(zeros.thetas)
    max_gap = float(gaps.max())
    n = zeros.n_plus_1 - 1
    scaled_p = scaled_f = None
    if p is not None:
        if p <= 1:
            raise ValueError("p must exceed 1")
        scaled_p = n ** (1.0 / p) * max_gap
    if f_at_n is not None:
        if f_at_n <= 0:
            raise ValueError("f(n) must be positive")
        scaled_f = n / f_at_n * max_gap
    return SpacingReport(n_plus_1=zeros.n_plus_1, max_gap=max_gap, min_gap=float(gaps.min()),
                         gaps=gaps, scaled_p=scaled_p, scaled_f=scaled_f)


def gap_histogram(report: SpacingReport, bins: int) -> tuple[np.ndarray, np.ndarray]:
    """Counts and bin edges of the gaps in units of the mean gap 2pi/(n+1)."""
    if bins < 1:
        raise ValueError("bins must be positive")
    return np.histogram(report.gaps * report.n_plus_1 / TWO_PI, bins=bins)


def _beta_for(beta_schedule, n: int) -> complex:
    return beta_schedule(n) if callable(beta_schedule) else beta_schedule


def gap_scaling_sweep(model: VerblunskyModel, beta_schedule: complex | Callable[[int], complex],
                      p: float, n_list: Sequence[int],
                      tol_theta: float = DEFAULT_TOL) -> list[SweepRow]:
    """One row (n, max_gap, n^{1/p} max_gap, l^p norm of alpha_0..alpha_{n-1}) per n."""
    n_list = list(n_list)
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly increasing")
    rows = []
    for n in n_list:
        rep = spacing_report(find_zeros(model, n, _beta_for(beta_schedule, n), tol_theta), p=p)
        rows.append(SweepRow(n=n, max_gap=rep.max_gap, scaled=rep.scaled_p,
                             lp_norm=lp_norm(model, n, p)))
    return rows


def looks_decaying(model: VerblunskyModel, n: int) -> bool:
    """Empirical alpha_j -> 0 check.

    True when the largest modulus over the last decade of indices [n/10, n) is
    below half the largest modulus overall.
    """
    mod = np.abs(model.coefficients(n))
    if not mod.any():
        return True
    return bool(mod[n // 10:].max() < 0.5 * mod.max())


def weak_type_check(model: VerblunskyModel, beta: complex, n: int,
                    tol_theta: float = DEFAULT_TOL, zeros: ZeroSet | None = None) -> float:
    """(n / f(n)) * max_gap with f(n) the rearranged partial sum of n moduli.

    Warns (SlowDecayWarning) when the coefficients do not appear to decay, and
    when f(n) = 0, in which case machine epsilon stands in for f(n).  Pass
    ``zeros`` to reuse an already computed zero set of Phi_{n+1}^{(beta)}.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not looks_decaying(model, n):
        warnings.warn("coefficients do not appear to tend to zero", SlowDecayWarning, stacklevel=2)
    f_n = float(decreasing_rearrangement(model, n).partial_sums[-1])
    if f_n == 0.0:
        warnings.warn("f(n) = 0; using machine epsilon", SlowDecayWarning, stacklevel=2)
        f_n = float(np.finfo(float).eps)
    if zeros is None:
        zeros = find_zeros(model, n, beta, tol_theta)
    elif zeros.n_plus_1 != n + 1:
        raise ValueError("zero set does not match n")
    return float(spacing_report(zeros, f_at_n=f_n).scaled_f)


def counting_measure(model: VerblunskyModel, n: int, beta: complex,
                     tol_theta: float = DEFAULT_TOL) -> CountingMeasure:
    """nu_n: uniform atoms on the n zeros of Phi_n^{(beta)}."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return CountingMeasure.from_zeros(find_zeros(model, n - 1, beta, tol_theta))


def interval_weight(measure: CountingMeasure, phi: float, delta: float, r: float) -> MeasureReport:
    """nu_n mass of the half-open arc [phi, phi + delta) taken mod 2pi."""
    if not 0 < delta <= TWO_PI:
        raise ValueError("delta must lie in (0, 2pi]")
    offsets = np.mod(measure.thetas - phi, TWO_PI)
    hits = measure.thetas.size if delta == TWO_PI else int(np.count_nonzero(offsets < delta))
    center = delta / TWO_PI
    return MeasureReport(phi=float(phi), delta=float(delta), weight=hits / measure.n,
                         band_low=max(0.0, center - r), band_high=min(1.0, center + r), r=float(r))


def interval_grid(count: int, delta_min: float = 0.1, delta_max: float = TWO_PI) -> list[tuple[float, float]]:
    """Deterministic (phi, delta) grid: evenly spread starts and lengths."""
    if count < 1:
        raise ValueError("count must be positive")
    phis = TWO_PI * (np.arange(count) * 0.6180339887498949 % 1.0)
    deltas = np.linspace(delta_min, delta_max, count)
    return [(float(a), float(d)) for a, d in zip(phis, deltas)]


def random_intervals(count: int, seed: int) -> list[tuple[float, float]]:
    rng = np.random.default_rng(seed)
    phis = rng.uniform(0.0, TWO_PI, count)
    deltas = rng.uniform(0.0, TWO_PI, count)
    deltas[deltas == 0.0] = TWO_PI
    return [(float(a), float(d)) for a, d in zip(phis, deltas)]


def mhaskar_saff_check(model: VerblunskyModel, beta: complex, n: int,
                       grid: Iterable[tuple[float, float]],
                       tol_theta: float = DEFAULT_TOL) -> float:
    """Worst exit of nu_n interval weights from [D/2pi - r, D/2pi + r].

    r is the Cesaro mean of |alpha_0| .. |alpha_{n-1}|.  Returns 0 when every
    interval of the grid lands inside its band.
    """
    r = cesaro_mean(model, n).mean_modulus
    measure = counting_measure(model, n, beta, tol_theta)
    return max((interval_weight(measure, phi, delta, r).violation for phi, delta in grid),
               default=0.0)
