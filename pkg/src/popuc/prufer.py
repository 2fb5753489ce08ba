"""Prufer phase of the Blaschke product b_n.

``eta_n`` is the continuous branch of ``arg(e^{i theta} b_n(e^{i theta}))``
normalized by ``eta_0(theta) = theta``.  It is built from the closed sum

    eta_n(theta) = (n+1) theta - 2 sum_{j<n} arg(1 - alpha_j e^{i theta} b_j(e^{i theta}))

Every summand has modulus below pi/2 because ``|alpha_j| < 1``, so the principal
``arg`` never needs unwrapping.
"""

from __future__ import annotations

import numpy as np

from .opuc import iter_blaschke
from .verblunsky import VerblunskyModel


class PhaseEvaluator:
    """eta_n for a fixed model and degree index n (uses alpha_0 .. alpha_{n-1}).

    Immutable after construction; the coefficient array is materialized once.
    """

    __slots__ = ("model", "n", "alphas")

    def __init__(self, model: VerblunskyModel, n: int):
        if n < 0:
            raise ValueError("n must be non-negative")
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "n", int(n))
        alphas = model.coefficients(n)
        alphas.setflags(write=False)
        object.__setattr__(self, "alphas", alphas)

    def __setattr__(self, name, value):
        raise AttributeError("PhaseEvaluator is immutable")

    def __repr__(self):
        return f"PhaseEvaluator(model={self.model!r}, n={self.n})"

    def summands(self, theta) -> np.ndarray:
        """arg(1 - alpha_j e^{i theta} b_j), shape (n,) + shape(theta)."""
        theta = np.asarray(theta, dtype=float)
        z = np.exp(1j * theta)
        out = np.empty((self.n,) + theta.shape)
        for j, b in enumerate(iter_blaschke(self.alphas, z)):
            if j == self.n:
                break
            out[j] = np.angle(1.0 - self.alphas[j] * z * b)
        return out

    def __call__(self, theta, check_summands: bool = False):
        theta = np.asarray(theta, dtype=float)
        z = np.exp(1j * theta)
        total = np.zeros(theta.shape)
        u = z  # e^{i eta_j} = z b_j, starting from b_0 = 1
        for j, a in enumerate(self.alphas):
            w = 1.0 - a * u
            term = np.angle(w)
            if check_summands and np.any(np.abs(term) > np.arcsin(abs(a)) + 1e-12):
                raise ArithmeticError(f"phase summand {j} exceeds arcsin|alpha_{j}|")
            total += term
            b = (u - np.conj(a)) / w
            u = z * (b / np.abs(b))
        eta = (self.n + 1) * theta - 2.0 * total
        return float(eta) if eta.ndim == 0 else eta


def phase(evaluator: PhaseEvaluator, theta, check_summands: bool = False):
    """eta_n(theta); accepts scalars or arrays."""
    return evaluator(theta, check_summands=check_summands)


def phase_increment(evaluator: PhaseEvaluator, a: float, b: float) -> float:
    """eta_n(b) - eta_n(a) for a <= b."""
    if a > b:
        raise ValueError("phase_increment needs a <= b")
    if a == b:
        return 0.0
    ends = evaluator(np.array([a, b], dtype=float))
    return float(ends[1] - ends[0])
