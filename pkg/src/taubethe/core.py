"""Numerical kernel: tolerances, determinants, residuals and seeded sampling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class TauBetheError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(TauBetheError, ValueError):
    pass


class SamplingError(TauBetheError, RuntimeError):
    pass


@dataclass(frozen=True)
class Tolerance:
    rel: float = 1e-8
    abs_floor: float = 1e-300

    def __post_init__(self):
        if not (0 < self.rel < 1):
            raise ValueError(f"rel must lie in (0, 1), got {self.rel}")
        if not self.abs_floor > 0:
            raise ValueError(f"abs_floor must be positive, got {self.abs_floor}")


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class SampleConfig:
    """Seeded sampler settings for generic complex parameters.

    Values are drawn in the annulus ``modulus_range[0] < |v| < modulus_range[1]``
    with uniform phase, and kept ``min_separation`` apart from each other and
    from any forbidden point.
    """

    seed: int = 0
    modulus_range: tuple[float, float] = (0.5, 2.0)
    min_separation: float = 0.05

    def __post_init__(self):
        lo, hi = self.modulus_range
        if not (0 < lo < hi):
            raise ValueError(f"need 0 < lower < upper, got {self.modulus_range}")
        if not self.min_separation > 0:
            raise ValueError("min_separation must be positive")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def determinant(m) -> complex:
    """Determinant by row-pivoted LU elimination (LAPACK getrf)."""
    a = as_matrix(m)
    rows, cols = a.shape
    if rows != cols:
        raise DimensionError(f"determinant needs a square matrix, got {rows}x{cols}")
    if rows == 0:
        return 1.0 + 0j
    return complex(np.linalg.det(a))


def approx_equal(a: complex, b: complex, tol: Tolerance = DEFAULT_TOL, scale: float = 0.0) -> bool:
    if scale < 0:
        raise ValueError("scale must be nonnegative")
    bound = max(abs(a), abs(b), scale, tol.abs_floor)
    return abs(a - b) <= tol.rel * bound


def normalized_residual(terms: Iterable[complex], abs_floor: float = DEFAULT_TOL.abs_floor) -> float:
    """``|sum T| / max(sum |T|, abs_floor)`` for an identity ``sum T = 0``."""
    t = np.asarray(list(terms), dtype=complex)
    if t.size == 0:
        return 0.0
    return float(abs(t.sum()) / max(float(np.abs(t).sum()), abs_floor))


def relative_error(a: complex, b: complex, abs_floor: float = DEFAULT_TOL.abs_floor) -> float:
    return float(abs(a - b) / max(abs(a), abs(b), abs_floor))


def hadamard_residual(m) -> float:
    """|det M| divided by the product of column norms (Hadamard's bound)."""
    a = as_matrix(m)
    norms = np.linalg.norm(a, axis=0)
    bound = float(np.prod(norms))
    if bound == 0.0:
        return 0.0
    return abs(determinant(a)) / bound


def sample_points(cfg: SampleConfig, n: int, forbidden: Iterable[complex] = (),
                  rng: np.random.Generator | None = None, max_tries: int = 10_000) -> list[complex]:
    """Draw ``n`` separated complex points in the configured annulus.

    With ``rng=None`` a fresh generator is seeded from ``cfg.seed`` so the
    output is a pure function of its arguments.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    gen = cfg.rng() if rng is None else rng
    lo, hi = cfg.modulus_range
    sep = cfg.min_separation
    blocked = [complex(f) for f in forbidden]
    out: list[complex] = []
    tries = 0
    while len(out) < n:
        tries += 1
        if tries > max_tries:
            raise SamplingError(
                f"placed only {len(out)} of {n} points after {max_tries} draws "
                f"(min_separation={sep}, {len(blocked)} forbidden points)")
        r = gen.uniform(lo, hi)
        phi = gen.uniform(-np.pi, np.pi)
        v = complex(r * np.cos(phi), r * np.sin(phi))
        if all(abs(v - w) >= sep for w in out) and all(abs(v - w) >= sep for w in blocked):
            out.append(v)
    _check_separated(out, blocked, sep, lo, hi)
    return out


def _check_separated(points: Sequence[complex], blocked: Sequence[complex], sep: float,
                     lo: float, hi: float) -> None:
    for i, v in enumerate(points):
        assert lo <= abs(v) <= hi
        assert all(abs(v - w) >= sep for w in points[i + 1:])
        assert all(abs(v - w) >= sep for w in blocked)
