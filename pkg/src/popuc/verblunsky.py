"""Verblunsky coefficient models and the sequence statistics built on them.

A model is a deterministic rule ``j -> alpha_j`` with every ``alpha_j`` strictly
inside the unit disk.  Random models are counter based: ``alpha_j`` depends only
on ``(seed, j)``, never on the order in which indices are requested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

KINDS = ("zero", "constant", "power", "log", "iid", "file")
PHASE_RULES = ("none", "alternating", "random")

# Salt so the phase stream of a decay model never coincides with an iid model
# built from the same seed.
_PHASE_SALT = 0x9E3779B97F4A7C15


def _uniform_pair(seed: int, j: int) -> tuple[float, float]:
    """Two U[0,1) deviates keyed on (seed, j) through a Philox counter."""
    gen = np.random.Generator(np.random.Philox(key=seed, counter=j))
    u, v = gen.random(2)
    return float(u), float(v)


@dataclass(frozen=True)
class VerblunskyModel:
    """Rule producing Verblunsky coefficients alpha_0, alpha_1, ...

    Use the classmethod constructors rather than filling fields by hand; they
    validate that every coefficient the model can produce lies in the open disk.
    """

    kind: str
    alpha: complex = 0j
    amplitude: float = 0.0
    exponent: float = 1.0
    phase_rule: str = "none"
    radius: float = 0.0
    seed: int = 0
    path: str | None = None
    values: tuple[complex, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; expected one of {KINDS}")
        if self.phase_rule not in PHASE_RULES:
            raise ValueError(f"unknown phase rule {self.phase_rule!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.kind == "constant" and not abs(self.alpha) < 1:
            raise ValueError("constant coefficient must satisfy |alpha| < 1")
        if self.kind == "power":
            if self.amplitude <= 0 or not 0 < self.exponent <= 1:
                raise ValueError("power decay needs A > 0 and q in (0, 1]")
            # largest modulus is at j = 0
            if not self.amplitude / 2.0**self.exponent < 1:
                raise ValueError("power decay with A/2^q >= 1 leaves the unit disk")
        if self.kind == "log":
            if self.amplitude <= 0:
                raise ValueError("log decay needs A > 0")
            if not self.amplitude / math.log(2.0) < 1:
                raise ValueError("log decay with A/log(2) >= 1 leaves the unit disk")
        if self.kind == "iid" and not 0 < self.radius < 1:
            raise ValueError("iid disk radius must lie in (0, 1)")
        if self.kind == "file":
            bad = [j for j, a in enumerate(self.values) if not abs(a) < 1]
            if bad:
                raise ValueError(f"coefficient file entry {bad[0]} has modulus >= 1")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> VerblunskyModel:
        return cls("zero")

    @classmethod
    def constant(cls, alpha: complex) -> VerblunskyModel:
        """Geronimus model alpha_j = alpha for all j."""
        return cls("constant", alpha=complex(alpha))

    @classmethod
    def power_decay(cls, amplitude: float, exponent: float,
                    phase_rule: str = "none", seed: int = 0) -> VerblunskyModel:
        """|alpha_j| = A / (j + 2)^q."""
        return cls("power", amplitude=float(amplitude), exponent=float(exponent),
                   phase_rule=phase_rule, seed=int(seed))

    @classmethod
    def log_decay(cls, amplitude: float, phase_rule: str = "none",
                  seed: int = 0) -> VerblunskyModel:
        """|alpha_j| = A / log(j + 2)."""
        return cls("log", amplitude=float(amplitude), phase_rule=phase_rule, seed=int(seed))

    @classmethod
    def iid_uniform_disk(cls, radius: float, seed: int) -> VerblunskyModel:
        """I.i.d. coefficients uniform on the disk of the given radius."""
        return cls("iid", radius=float(radius), seed=int(seed))

    @classmethod
    def from_file(cls, path: str | Path) -> VerblunskyModel:
        """Load ``re im`` pairs, one per line; ``#`` starts a comment."""
        data = np.loadtxt(path, comments="#", ndmin=2, dtype=float)
        if data.size and data.shape[1] != 2:
            raise ValueError(f"{path}: expected two columns (re im), got {data.shape[1]}")
        values = tuple(complex(re, im) for re, im in data)
        return cls("file", path=str(path), values=values)

    @classmethod
    def from_values(cls, values) -> VerblunskyModel:
        """Finite coefficient list held in memory (same rules as a file)."""
        return cls("file", values=tuple(complex(v) for v in values))

    # -- evaluation -------------------------------------------------------

    def _phase(self, j: int) -> complex:
        if self.phase_rule == "none":
            return 1.0
        if self.phase_rule == "alternating":
            return -1.0 if j % 2 else 1.0
        _, v = _uniform_pair(self.seed ^ _PHASE_SALT, j)
        return complex(math.cos(2 * math.pi * v), math.sin(2 * math.pi * v))

    def coefficient(self, j: int) -> complex:
        if j < 0:
            raise IndexError("coefficient index must be non-negative")
        kind = self.kind
        if kind == "zero":
            return 0j
        if kind == "constant":
            return self.alpha
        if kind == "power":
            return complex(self.amplitude / (j + 2) ** self.exponent * self._phase(j))
        if kind == "log":
            return complex(self.amplitude / math.log(j + 2) * self._phase(j))
        if kind == "iid":
            u, v = _uniform_pair(self.seed, j)
            r = self.radius * math.sqrt(u)
            return complex(r * math.cos(2 * math.pi * v), r * math.sin(2 * math.pi * v))
        if j >= len(self.values):
            raise IndexError("coefficient index out of range")
        return self.values[j]

    def coefficients(self, n: int) -> np.ndarray:
        """alpha_0 .. alpha_{n-1} as a complex array."""
        if n < 0:
            raise ValueError("n must be non-negative")
        if self.kind == "zero":
            return np.zeros(n, dtype=complex)
        if self.kind == "constant":
            return np.full(n, self.alpha, dtype=complex)
        if self.kind in ("power", "log") and self.phase_rule != "random":
            j = np.arange(n)
            if self.kind == "power":
                mod = self.amplitude / (j + 2.0) ** self.exponent
            else:
                mod = self.amplitude / np.log(j + 2.0)
            sign = np.where(j % 2 == 1, -1.0, 1.0) if self.phase_rule == "alternating" else 1.0
            return (mod * sign).astype(complex)
        if self.kind == "file" and n > len(self.values):
            raise IndexError("coefficient index out of range")
        return np.array([self.coefficient(j) for j in range(n)], dtype=complex)


@dataclass(frozen=True)
class RearrangementReport:
    n: int
    sorted_moduli: np.ndarray
    partial_sums: np.ndarray


@dataclass(frozen=True)
class CesaroStats:
    n: int
    mean_modulus: float


def coefficient(model: VerblunskyModel, j: int) -> complex:
    return model.coefficient(j)


def decreasing_rearrangement(model: VerblunskyModel, n: int) -> RearrangementReport:
    """Moduli of the first n coefficients sorted non-increasingly.

    Ties keep their original index order.  ``partial_sums[N]`` is the majorant
    value sum_{k<=N} |alpha~_k|.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    mod = np.abs(model.coefficients(n))
    order = np.argsort(-mod, kind="stable")
    srt = mod[order]
    return RearrangementReport(n=n, sorted_moduli=srt, partial_sums=np.cumsum(srt))


def cesaro_mean(model: VerblunskyModel, n: int) -> CesaroStats:
    if n < 1:
        raise ValueError("n must be at least 1")
    return CesaroStats(n=n, mean_modulus=float(np.mean(np.abs(model.coefficients(n)))))


def lp_norm(model: VerblunskyModel, n: int, p: float) -> float:
    if n < 1 or p < 1:
        raise ValueError("need n >= 1 and p >= 1")
    mod = np.abs(model.coefficients(n))
    if not mod.any():
        return 0.0
    # scale by the max to keep large p finite
    top = mod.max()
    return float(top * np.sum((mod / top) ** p) ** (1.0 / p))
