"""Symmetric functions over multisets with multiplicities.

Elementary and complete symmetric functions, the discrete derivative,
Schur polynomials (bialternant and Jacobi-Trudi forms), one-row and
general character polynomials, and the Miwa change of variables
``t_j = sum_i m_i x_i**j / j``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .core import DimensionError, TauBetheError, determinant


class VandermondeSingularError(TauBetheError, ZeroDivisionError):
    pass


class ArityError(TauBetheError, ValueError):
    pass


class MissingVariableError(TauBetheError, KeyError):
    pass


@dataclass(frozen=True)
class MiwaMultiset:
    """Finite multiset of complex values, each carrying a multiplicity.

    Repeated values are kept as one entry with a multiplicity, never expanded
    into separate slots.
    """

    entries: tuple[tuple[complex, int], ...] = ()

    def __post_init__(self):
        norm = []
        for v, m in self.entries:
            if int(m) != m or m < 0:
                raise ValueError(f"multiplicity must be a nonnegative integer, got {m!r}")
            norm.append((complex(v), int(m)))
        object.__setattr__(self, "entries", tuple(norm))

    @classmethod
    def of(cls, values: Iterable[complex], mults: Iterable[int] | None = None) -> "MiwaMultiset":
        values = list(values)
        mults = [1] * len(values) if mults is None else list(mults)
        if len(mults) != len(values):
            raise DimensionError("values and multiplicities differ in length")
        return cls(tuple(zip(values, mults)))

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def values(self) -> tuple[complex, ...]:
        return tuple(v for v, _ in self.entries)

    @property
    def mults(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.entries)

    def total(self) -> int:
        return sum(self.mults)

    def min_separation(self) -> float:
        vals = self.values
        if len(vals) < 2:
            return float("inf")
        return min(abs(a - b) for a, b in combinations(vals, 2))

    def shifted(self, indices: Iterable[int], by: int = 1) -> "MiwaMultiset":
        """Raise the multiplicity of each listed entry by ``by``."""
        mults = list(self.mults)
        for k in indices:
            mults[k] += by
            if mults[k] < 0:
                raise MissingVariableError(f"entry {k} has no copy left to remove")
        return MiwaMultiset(tuple(zip(self.values, mults)))

    def without_one(self, m: int) -> "MiwaMultiset":
        if self.entries[m][1] < 1:
            raise MissingVariableError(f"entry {m} has multiplicity 0")
        return self.shifted([m], by=-1)

    def power_sum(self, k: int) -> complex:
        return sum(mult * v**k for v, mult in self.entries)

    def expanded(self) -> list[complex]:
        return [v for v, m in self.entries for _ in range(m)]


def _power_sums(x: MiwaMultiset, kmax: int) -> list[complex]:
    p = [0j] * (kmax + 1)
    for v, m in x.entries:
        if m == 0:
            continue
        w = 1 + 0j
        for k in range(1, kmax + 1):
            w *= v
            p[k] += m * w
    return p


def complete_sym_series(x: MiwaMultiset, kmax: int) -> np.ndarray:
    """``h_0 .. h_kmax`` via Newton's identities ``k h_k = sum_i p_i h_{k-i}``."""
    h = [1 + 0j] + [0j] * max(kmax, 0)
    if kmax > 0:
        p = _power_sums(x, kmax)
        for k in range(1, kmax + 1):
            h[k] = sum(p[i] * h[k - i] for i in range(1, k + 1)) / k
    return np.array(h, dtype=complex)


def elem_sym_series(x: MiwaMultiset, kmax: int) -> np.ndarray:
    """``e_0 .. e_kmax`` via ``k e_k = sum_i (-1)**(i-1) p_i e_{k-i}``."""
    e = [1 + 0j] + [0j] * max(kmax, 0)
    top = min(kmax, x.total())
    if top > 0:
        p = _power_sums(x, top)
        for k in range(1, top + 1):
            e[k] = sum((-1) ** (i - 1) * p[i] * e[k - i] for i in range(1, k + 1)) / k
    return np.array(e, dtype=complex)


def elem_sym(x: MiwaMultiset, i: int) -> complex:
    if i < 0 or i > x.total():
        return 0j
    return complex(elem_sym_series(x, i)[i])


def complete_sym(x: MiwaMultiset, i: int) -> complex:
    if i < 0:
        return 0j
    return complex(complete_sym_series(x, i)[i])


def discrete_derivative(x: MiwaMultiset, m: int,
                        f: Callable[[MiwaMultiset, int], complex] = complete_sym
                        ) -> Callable[[int], complex]:
    """Difference quotient of ``f`` in the variable ``x_m``.

    Returns ``i -> (f(x, i) - f(x with one copy of x_m removed, i)) / x_m``.
    For ``f = complete_sym`` this is ``i -> h_{i-1}(x)``.
    """
    value, mult = x.entries[m]
    if mult < 1:
        raise MissingVariableError(f"entry {m} has multiplicity 0")
    if value == 0:
        raise ZeroDivisionError(f"discrete derivative in a zero variable (entry {m})")
    reduced = x.without_one(m)

    def delta(i: int) -> complex:
        return (f(x, i) - f(reduced, i)) / value

    return delta


@dataclass(frozen=True)
class Partition:
    rows: tuple[int, ...] = ()

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if any(r < 0 for r in rows):
            raise ValueError(f"negative row in {rows}")
        if any(a < b for a, b in zip(rows, rows[1:])):
            raise ValueError(f"rows must be weakly decreasing, got {rows}")
        while rows and rows[-1] == 0:
            rows = rows[:-1]
        object.__setattr__(self, "rows", rows)

    def length(self) -> int:
        return len(self.rows)

    def size(self) -> int:
        return sum(self.rows)

    def padded(self, n: int) -> tuple[int, ...]:
        if n < self.length():
            raise DimensionError(f"cannot pad {self.rows} to {n} rows")
        return self.rows + (0,) * (n - self.length())


def partitions_in_box(rows: int, cols: int) -> Iterator[Partition]:
    """All partitions with at most ``rows`` parts, each at most ``cols``."""

    def rec(remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for first in range(cap, -1, -1):
            for rest in rec(remaining - 1, first):
                yield (first,) + rest

    for r in rec(rows, cols):
        yield Partition(r)


def vandermonde(xs: Sequence[complex]) -> complex:
    xs = [complex(v) for v in xs]
    out = 1 + 0j
    for i, j in combinations(range(len(xs)), 2):
        out *= xs[i] - xs[j]
    return out


def bracket(u: complex) -> complex:
    e = cmath.exp(u)
    return e - 1 / e


def vandermonde_trig(lams: Sequence[complex]) -> complex:
    out = 1 + 0j
    for a, b in combinations(list(lams), 2):
        out *= bracket(a - b)
    return out


def schur_bialternant(lam: Partition, x: MiwaMultiset) -> complex:
    """``det(x_i**(lam_j - j + N)) / Vandermonde(x)`` on N distinct values."""
    if any(m != 1 for m in x.mults):
        raise ValueError("bialternant form needs every multiplicity equal to 1")
    vals = x.values
    n = len(vals)
    if lam.length() > n:
        raise DimensionError(f"partition {lam.rows} has more rows than the {n} variables")
    if n == 0:
        return 1 + 0j
    scale = max(1.0, max(abs(v) for v in vals))
    if any(abs(a - b) <= 1e-13 * scale for a, b in combinations(vals, 2)):
        raise VandermondeSingularError("coincident values; use schur_jacobi_trudi")
    parts = lam.padded(n)
    mat = [[vals[i] ** (parts[j] - (j + 1) + n) for j in range(n)] for i in range(n)]
    return determinant(mat) / vandermonde(vals)


def schur_jacobi_trudi(lam: Partition, x: MiwaMultiset, window: int | None = None) -> complex:
    """``det(h_{lam_i - i + j}(x))`` over an ``n x n`` window, ``n >= len(lam)``."""
    n = max(lam.length(), 1) if window is None else window
    if n < lam.length():
        raise DimensionError("window smaller than the partition length")
    parts = lam.padded(n)
    h = complete_sym_series(x, max(parts[0] + n - 1, 0))

    def hh(k: int) -> complex:
        return h[k] if k >= 0 else 0j

    mat = [[hh(parts[i] - i + j) for j in range(n)] for i in range(n)]
    return determinant(mat)


def char_one_row(t: Sequence[complex], i: int) -> complex:
    """Coefficient of ``k**i`` in ``exp(sum_j t_j k**j)``; ``t[0]`` holds ``t_1``."""
    if i < 0:
        return 0j
    if i == 0:
        return 1 + 0j
    if len(t) < i:
        raise ArityError(f"chi_{i} needs t_1..t_{i}, got {len(t)} times")
    chi = [1 + 0j]
    for k in range(1, i + 1):
        chi.append(sum(j * t[j - 1] * chi[k - j] for j in range(1, k + 1)) / k)
    return chi[i]


def char_poly(lam: Partition, t: Sequence[complex]) -> complex:
    r = lam.length()
    if r == 0:
        return 1 + 0j
    need = lam.rows[0] + r - 1
    if len(t) < need:
        raise ArityError(f"chi_{lam.rows} needs t_1..t_{need}, got {len(t)} times")
    mat = [[char_one_row(t, lam.rows[i] - i + j) for j in range(r)] for i in range(r)]
    return determinant(mat)


def miwa_map(x: MiwaMultiset, j: int) -> complex:
    if j < 1:
        raise ValueError("Miwa times are indexed from 1")
    return x.power_sum(j) / j


def miwa_times(x: MiwaMultiset, count: int) -> tuple[complex, ...]:
    return tuple(miwa_map(x, j) for j in range(1, count + 1))
