"""Pointwise evaluation of OPUC quantities on the unit circle.

Everything here is evaluated at ``z = exp(i*theta)``.  ``theta`` may be a scalar
or an array; angles are never wrapped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .verblunsky import VerblunskyModel

BETA_TOL = 1e-6


@dataclass(frozen=True)
class BlaschkeTrace:
    """b_0(e^{i theta}), ..., b_n(e^{i theta}) at one angle."""

    theta: float
    values: np.ndarray
    max_drift: float = 0.0  # largest | |b_j| - 1 | seen before renormalizing


@dataclass(frozen=True)
class PolyPairValue:
    phi: complex
    phi_star: complex


def iter_blaschke(alphas: np.ndarray, z: np.ndarray, drift: list | None = None) -> Iterator[np.ndarray]:
    """Yield b_0(z), b_1(z), ..., b_len(alphas)(z) for unimodular z.

    One Mobius step per coefficient,
    ``b_{j+1} = (z b_j - conj(a_j)) / (1 - a_j z b_j)``, renormalized to
    modulus one.  If ``drift`` is a list, the running maximum of the
    pre-renormalization error is stored in ``drift[0]``.
    """
    b = np.ones_like(z)
    yield b
    for a in alphas:
        u = z * b
        b = (u - np.conj(a)) / (1.0 - a * u)
        mod = np.abs(b)
        if drift is not None:
            drift[0] = max(drift[0], float(np.max(np.abs(mod - 1.0))))
        b = b / mod
        yield b


def _unit(theta) -> np.ndarray:
    return np.exp(1j * np.asarray(theta, dtype=float))


def blaschke_trace(model: VerblunskyModel, n: int, theta: float) -> BlaschkeTrace:
    if n < 0:
        raise ValueError("n must be non-negative")
    z = _unit(theta)
    drift = [0.0]
    values = np.array(list(iter_blaschke(model.coefficients(n), z, drift)), dtype=complex)
    return BlaschkeTrace(theta=float(theta), values=values, max_drift=drift[0])


def blaschke_value(alphas: np.ndarray, theta) -> np.ndarray:
    """b_n(e^{i theta}) with n = len(alphas), vectorized over theta."""
    b = None
    for b in iter_blaschke(alphas, _unit(theta)):
        pass
    return b


def pair_values(alphas: np.ndarray, theta) -> tuple[np.ndarray, np.ndarray]:
    """(Phi_n, Phi_n^*) at e^{i theta} from the coupled Szego value recursion."""
    z = _unit(theta)
    phi = np.ones_like(z)
    star = np.ones_like(z)
    for a in alphas:
        phi, star = z * phi - np.conj(a) * star, star - a * z * phi
    return phi, star


def poly_pair(model: VerblunskyModel, n: int, theta: float) -> PolyPairValue:
    if n < 0:
        raise ValueError("n must be non-negative")
    phi, star = pair_values(model.coefficients(n), theta)
    return PolyPairValue(phi=complex(phi), phi_star=complex(star))


def check_beta(beta: complex) -> complex:
    """Validate |beta| = 1 and return it renormalized."""
    beta = complex(beta)
    if abs(abs(beta) - 1.0) > BETA_TOL:
        raise ValueError("beta must be unimodular")
    return beta / abs(beta)


def popuc_values(alphas: np.ndarray, beta: complex, theta) -> np.ndarray:
    """Phi_{n+1}^{(beta)}(e^{i theta}) = z Phi_n - conj(beta) Phi_n^*, vectorized."""
    phi, star = pair_values(alphas, theta)
    return _unit(theta) * phi - np.conj(beta) * star


def popuc_value(model: VerblunskyModel, n: int, beta: complex, theta: float) -> complex:
    if n < 0:
        raise ValueError("n must be non-negative")
    beta = check_beta(beta)
    return complex(popuc_values(model.coefficients(n), beta, theta))
