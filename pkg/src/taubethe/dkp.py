"""Casoratian tau-functions over Miwa multisets and discrete KP identities.

A coefficient matrix ``c`` of shape ``N x W`` defines

    omega_ij{x} = sum_{k=1..W} c_ik h_{k-j}{x}

and ``tau = det(omega_ij)_{i,j=1..N}``. Raising the multiplicity of a base
variable is a discrete time step. Every residual below is normalized by the
total magnitude of the terms entering the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .core import DEFAULT_TOL, DimensionError, determinant, hadamard_residual, normalized_residual
from .symfun import MiwaMultiset, complete_sym_series, vandermonde


@dataclass(frozen=True, eq=False)
class CasoratianSpec:
    """Coefficient matrix ``c`` (``N`` rows, ``N + L - 1`` columns)."""

    c: np.ndarray

    def __post_init__(self):
        c = np.array(self.c, dtype=complex)
        if c.ndim != 2 or c.shape[0] < 1 or c.shape[1] < c.shape[0]:
            raise DimensionError(f"coefficient matrix must be N x W with W >= N, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def width(self) -> int:
        return self.c.shape[1]

    def smallest_singular_value(self) -> float:
        return float(np.linalg.svd(self.c, compute_uv=False)[-1])

    @classmethod
    def random(cls, n: int, width: int, rng: np.random.Generator) -> "CasoratianSpec":
        return cls(rng.normal(size=(n, width)) + 1j * rng.normal(size=(n, width)))


def omega_columns(c: np.ndarray, x: MiwaMultiset, cols: Iterable[int]) -> np.ndarray:
    """Columns ``omega_{., j}{x}`` for the 1-based indices ``cols``."""
    cols = list(cols)
    width = c.shape[1]
    top = max([width - j for j in cols] + [0])
    h = complete_sym_series(x, top)
    hmat = np.zeros((width, len(cols)), dtype=complex)
    for t, j in enumerate(cols):
        for k in range(1, width + 1):
            if k - j >= 0:
                hmat[k - 1, t] = h[k - j]
    return c @ hmat


def omega_entry(c: np.ndarray, x: MiwaMultiset, i: int, j: int) -> complex:
    """``omega_ij{x}`` with 1-based ``i`` and ``j``."""
    return complex(omega_columns(c, x, [j])[i - 1, 0])


def omega_matrix(c: np.ndarray, x: MiwaMultiset) -> np.ndarray:
    return omega_columns(c, x, range(1, c.shape[0] + 1))


@dataclass(frozen=True, eq=False)
class TauFunction:
    spec: CasoratianSpec
    base: MiwaMultiset
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.spec.n

    def x(self, k: int) -> complex:
        return self.base.values[k]

    def column(self, j: int, shifts: Sequence[int] = ()) -> np.ndarray:
        """``omega_j^{[shifts]}``: column ``j`` (1-based) on the shifted base."""
        key = (j, tuple(sorted(shifts)))
        if key not in self._cache:
            self._cache[key] = omega_columns(self.spec.c, self.base.shifted(shifts), [j])[:, 0]
        return self._cache[key]

    def det(self, columns: Sequence[tuple[int, Sequence[int]]]) -> complex:
        """Determinant of the listed ``(j, shifts)`` columns."""
        return determinant(np.column_stack([self.column(j, s) for j, s in columns]))


def tau(tf: TauFunction) -> complex:
    return tau_shift(tf, ())


def tau_shift(tf: TauFunction, shifts: Sequence[int]) -> complex:
    shifts = tuple(shifts)
    if len(set(shifts)) != len(shifts):
        raise ValueError(f"shift list has repeats: {shifts}")
    for k in shifts:
        if not 0 <= k < len(tf.base):
            raise IndexError(f"shift index {k} outside the base of size {len(tf.base)}")
    return tf.det([(j, shifts) for j in range(1, tf.n + 1)])


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of one identity evaluation; behaves as its residual under ``float``."""

    residual: float
    degenerate: bool = False
    terms: tuple[complex, ...] = ()

    def __float__(self) -> float:
        return float(self.residual)


def _coincident(tf: TauFunction, idx: Sequence[int], sep: float) -> bool:
    return any(abs(tf.x(a) - tf.x(b)) < sep for a, b in combinations(idx, 2))


def _arity(n: int, tf: TauFunction, lo: int) -> None:
    if not lo <= n <= tf.n:
        raise ValueError(f"need {lo} <= n <= N = {tf.n}, got n = {n}")


def _chosen(tf: TauFunction, n: int, variables: Sequence[int] | None) -> tuple[int, ...]:
    chosen = tuple(range(n)) if variables is None else tuple(variables)
    if len(chosen) != n or len(set(chosen)) != n:
        raise ValueError(f"need {n} distinct variable indices, got {chosen}")
    if len(tf.base) < n:
        raise ValueError(f"base has {len(tf.base)} variables, identity needs {n}")
    return chosen


def identity_a1(tf: TauFunction, n: int, var: int = 0) -> IdentityCheck:
    """``x^(n-2) tau^[var] = |omega_1 .. omega_{N-1} omega^[var]_{N-n+2}|``."""
    _arity(n, tf, 2)
    big_n = tf.n
    lhs = tf.x(var) ** (n - 2) * tau_shift(tf, (var,))
    rhs = tf.det([(j, ()) for j in range(1, big_n)] + [(big_n - n + 2, (var,))])
    return IdentityCheck(normalized_residual([lhs, -rhs]), False, (lhs, -rhs))


def identity_a2(tf: TauFunction, n: int, variables: Sequence[int] | None = None,
                sep: float = 0.0) -> IdentityCheck:
    """``prod_{r<s}(x_r - x_s) tau^[1..n]`` against the mixed-shift Casoratian."""
    _arity(n, tf, 2)
    chosen = _chosen(tf, n, variables)
    big_n = tf.n
    if sep > 0 and _coincident(tf, chosen, sep):
        return IdentityCheck(0.0, True)
    vd = vandermonde([tf.x(k) for k in chosen])
    lhs = vd * tau_shift(tf, chosen)
    cols = [(j, ()) for j in range(1, big_n - n + 1)]
    cols += [(big_n - n + 1, (k,)) for k in reversed(chosen)]
    rhs = tf.det(cols)
    return IdentityCheck(normalized_residual([lhs, -rhs]), False, (lhs, -rhs))


def laplace_terms(tf: TauFunction, variables: Sequence[int]) -> tuple[complex, ...]:
    """The ``n`` terms of the bilinear identity obtained from the Laplace expansion.

    Term ``nu`` is ``(-1)**nu x_nu**(n-2) tau^[nu] prod'(x_r - x_s) tau^[others]``.
    """
    chosen = tuple(variables)
    n = len(chosen)
    out = []
    for pos, k in enumerate(chosen):
        others = tuple(v for v in chosen if v != k)
        vd = vandermonde([tf.x(v) for v in others])
        out.append((-1) ** pos * tf.x(k) ** (n - 2) * tau_shift(tf, (k,)) * vd * tau_shift(tf, others))
    return tuple(out)


def laplace_identity_residual(tf: TauFunction, n: int, variables: Sequence[int] | None = None,
                              sep: float = DEFAULT_TOL.rel) -> IdentityCheck:
    _arity(n, tf, 3)
    chosen = _chosen(tf, n, variables)
    if _coincident(tf, chosen, sep):
        return IdentityCheck(0.0, True)
    terms = laplace_terms(tf, chosen)
    return IdentityCheck(normalized_residual(terms), False, terms)


def laplace_minor_terms(tf: TauFunction, n: int, variables: Sequence[int] | None = None) -> tuple[complex, ...]:
    """Terms of the Laplace expansion written as products of Casoratian minors.

    This evaluates the two ``N x N`` determinants of each term directly,
    without going through the two Casoratian identities.
    """
    _arity(n, tf, 3)
    chosen = _chosen(tf, n, variables)
    big_n = tf.n
    col = big_n - n + 2
    out = []
    for pos, k in enumerate(chosen):
        left = tf.det([(j, ()) for j in range(1, big_n)] + [(col, (k,))])
        rest = [v for v in reversed(chosen) if v != k]
        right = tf.det([(j, ()) for j in range(1, big_n - n + 2)] + [(col, (v,)) for v in rest])
        out.append((-1) ** pos * left * right)
    return tuple(out)


def laplace_block_matrix(tf: TauFunction, n: int, variables: Sequence[int] | None = None) -> np.ndarray:
    """The ``2N x 2N`` block matrix whose determinant vanishes identically."""
    _arity(n, tf, 3)
    chosen = _chosen(tf, n, variables)
    big_n = tf.n
    col = big_n - n + 2
    zero = np.zeros(big_n, dtype=complex)
    first = tf.column(col, (chosen[0],))
    tail = [tf.column(col, (v,)) for v in reversed(chosen[1:])]
    top = [tf.column(j) for j in range(1, big_n)] + [first] + [zero] * (big_n - n + 1) + tail
    bottom = [zero] * (big_n - 1) + [first] + [tf.column(j) for j in range(1, big_n - n + 2)] + tail
    return np.vstack([np.column_stack(top), np.column_stack(bottom)])


def laplace_block_residual(tf: TauFunction, n: int, variables: Sequence[int] | None = None) -> IdentityCheck:
    return IdentityCheck(hadamard_residual(laplace_block_matrix(tf, n, variables)))


def bilinear_matrix(tf: TauFunction, variables: Sequence[int], full_list: bool = False) -> np.ndarray:
    """Rows ``(1, x_i, .., x_i**(n-2), x_i**(n-2) tau_{+i} tau_{-i})``.

    ``tau_{-i}`` shifts every chosen variable except ``i``; with
    ``full_list=True`` it shifts every base variable except ``i`` instead.
    """
    chosen = tuple(variables)
    n = len(chosen)
    pool = tuple(range(len(tf.base))) if full_list else chosen
    rows = []
    for k in chosen:
        xk = tf.x(k)
        minus = tuple(v for v in pool if v != k)
        last = xk ** (n - 2) * tau_shift(tf, (k,)) * tau_shift(tf, minus)
        rows.append([xk**p for p in range(n - 1)] + [last])
    return np.array(rows, dtype=complex)


def bilinear_cofactor_terms(mat: np.ndarray) -> tuple[complex, ...]:
    """Cofactor expansion of ``det(mat)`` along its last column."""
    n = mat.shape[0]
    out = []
    for i in range(n):
        minor = np.delete(np.delete(mat, i, axis=0), n - 1, axis=1)
        out.append((-1) ** (i + n - 1) * mat[i, n - 1] * determinant(minor))
    return tuple(out)


def bilinear_det_residual(tf: TauFunction, variables: Sequence[int], full_list: bool = False,
                          sep: float = DEFAULT_TOL.rel) -> IdentityCheck:
    chosen = tuple(variables)
    n = len(chosen)
    _arity(n, tf, 3)
    _chosen(tf, n, chosen)
    mat = bilinear_matrix(tf, chosen, full_list)
    terms = bilinear_cofactor_terms(mat)
    if _coincident(tf, chosen, sep):
        return IdentityCheck(0.0, True, terms)
    return IdentityCheck(normalized_residual(terms), False, terms)


def hirota_miwa_terms(tf: TauFunction, triple: Sequence[int]) -> tuple[complex, ...]:
    i, j, k = triple
    xi, xj, xk = tf.x(i), tf.x(j), tf.x(k)
    return (xi * (xj - xk) * tau_shift(tf, (i,)) * tau_shift(tf, (j, k)),
            xj * (xk - xi) * tau_shift(tf, (j,)) * tau_shift(tf, (i, k)),
            xk * (xi - xj) * tau_shift(tf, (k,)) * tau_shift(tf, (i, j)))


def hirota_miwa_residual(tf: TauFunction, triple: Sequence[int]) -> IdentityCheck:
    if len(set(triple)) != 3:
        raise ValueError(f"need three distinct indices, got {tuple(triple)}")
    terms = hirota_miwa_terms(tf, triple)
    return IdentityCheck(normalized_residual(terms), False, terms)


def omega_a1_residual(c: np.ndarray, x: MiwaMultiset, i: int, j: int, m: int) -> float:
    """``omega_ij{x_m doubled} = omega_ij{x} + x_m omega_{i,j+1}{x_m doubled}``."""
    doubled = x.shifted([m])
    return normalized_residual([omega_entry(c, doubled, i, j), -omega_entry(c, x, i, j),
                                -x.values[m] * omega_entry(c, doubled, i, j + 1)])


def omega_a2_residual(c: np.ndarray, x: MiwaMultiset, i: int, j: int, r: int, s: int) -> float:
    """``(x_r - x_s) omega{x_r, x_s doubled} = x_r omega{x_r doubled} - x_s omega{x_s doubled}``."""
    xr, xs = x.values[r], x.values[s]
    lhs = (xr - xs) * omega_entry(c, x.shifted([r, s]), i, j)
    return normalized_residual([lhs, -xr * omega_entry(c, x.shifted([r]), i, j),
                                xs * omega_entry(c, x.shifted([s]), i, j)])


def casoratian_column_residual(c: np.ndarray, x: MiwaMultiset, i: int, j: int, m: int) -> float:
    """Residual of ``Delta_m omega_ij = omega_{i,j+1}`` (1-based ``i``, ``j``)."""
    xm = x.values[m]
    reduced = x.without_one(m)
    diff = (omega_entry(c, x, i, j) - omega_entry(c, reduced, i, j)) / xm
    target = omega_entry(c, x, i, j + 1)
    return normalized_residual([diff, -target])
