"""Slavnov's determinant and its Casoratian rewrite in exponentiated variables.

With ``x = e^{2 lam}``, ``y = e^{2 mu}``, ``z = e^{2 nu}`` and ``q = e^gamma``
the matrix entries of the determinant become polynomials in ``x`` whose
coefficients ``kappa_kj`` depend only on the Bethe roots. Transposing kappa
gives the Casoratian coefficient matrix ``c`` consumed by :mod:`taubethe.dkp`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence, Union

import numpy as np

from .bethe import BetheSolution
from .core import DEFAULT_TOL, SampleConfig, TauBetheError, determinant, sample_points
from .dkp import CasoratianSpec, omega_matrix
from .symfun import MiwaMultiset, bracket, elem_sym, partitions_in_box, schur_jacobi_trudi, vandermonde
from .xxz import ChainSpec, scalar_product_oracle

Roots = Union[BetheSolution, Sequence[complex]]


class PoleProximityError(TauBetheError, ValueError):
    """A free rapidity sits on a pole of the Slavnov matrix; resample it."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


class DegenerateSampleError(TauBetheError, ValueError):
    pass


def _mus(sol: Roots) -> tuple[complex, ...]:
    if isinstance(sol, BetheSolution):
        return sol.mus
    return tuple(complex(m) for m in sol)


@dataclass(frozen=True)
class ExponentiatedData:
    x: tuple[complex, ...]
    y: tuple[complex, ...]
    z: tuple[complex, ...]
    q: complex

    def __post_init__(self):
        for name in ("x", "y", "z"):
            vals = tuple(complex(v) for v in getattr(self, name))
            if any(v == 0 for v in vals):
                raise ValueError(f"{name} contains a zero")
            object.__setattr__(self, name, vals)
        object.__setattr__(self, "q", complex(self.q))
        if self.x and len(self.x) != len(self.y):
            raise ValueError(f"|x| = {len(self.x)} but |y| = {len(self.y)}")

    @property
    def n(self) -> int:
        return len(self.y)

    @property
    def L(self) -> int:
        return len(self.z)

    @property
    def width(self) -> int:
        return self.n + self.L - 1

    @classmethod
    def from_chain(cls, chain: ChainSpec, sol: Roots, lams: Sequence[complex] = ()) -> "ExponentiatedData":
        return cls(tuple(cmath.exp(2 * lam) for lam in lams),
                   tuple(cmath.exp(2 * m) for m in _mus(sol)),
                   tuple(complex(v) for v in chain.z()), chain.q())


def slavnov_matrix(chain: ChainSpec, lams: Sequence[complex], mus: Sequence[complex]) -> np.ndarray:
    g = chain.gamma
    n = len(lams)
    om = np.empty((n, n), dtype=complex)
    for i, li in enumerate(lams):
        ratio = math.prod((bracket(li - v + g) / bracket(li - v) for v in chain.nu), start=1 + 0j)
        ratio *= math.prod((bracket(li - m - g) / bracket(li - m + g) for m in mus), start=1 + 0j)
        for j, mj in enumerate(mus):
            om[i, j] = 1 / (bracket(li - mj) * bracket(li - mj + g)) \
                - ratio / (bracket(mj - li) * bracket(mj - li + g))
    return om


def _check_poles(chain: ChainSpec, lams: Sequence[complex], mus: Sequence[complex], floor: float) -> None:
    g = chain.gamma
    for i, li in enumerate(lams):
        for j, mj in enumerate(mus):
            for u in (li - mj, li - mj + g, mj - li + g):
                if abs(bracket(u)) <= floor:
                    raise PoleProximityError(f"lambda_{i + 1} = {li} hits a pole with mu_{j + 1} = {mj}", (i, j))
        for l, v in enumerate(chain.nu):
            if abs(bracket(li - v)) <= floor:
                raise PoleProximityError(f"lambda_{i + 1} = {li} hits nu_{l + 1} = {v}", (i, l))
    for a, b in combinations(range(len(lams)), 2):
        if abs(bracket(lams[a] - lams[b])) <= floor:
            raise PoleProximityError(f"lambda_{a + 1} and lambda_{b + 1} coincide", (a, b))


def slavnov_det(chain: ChainSpec, lams: Sequence[complex], sol: Roots, floor: float = 1e-12) -> complex:
    """Scalar product of a dual state with a Bethe state, in determinant form."""
    lams = [complex(v) for v in lams]
    mus = list(_mus(sol))
    if len(lams) != len(mus):
        raise ValueError("lams and mus must have the same length")
    n = len(mus)
    if n == 0:
        return 1 + 0j
    _check_poles(chain, lams, mus, floor)
    g = chain.gamma
    pre = bracket(g) ** n
    pre *= math.prod((bracket(li - mj + g) for li in lams for mj in mus), start=1 + 0j)
    pre *= math.prod((bracket(li - v) for li in lams for v in chain.nu), start=1 + 0j)
    pre *= math.prod((bracket(mj - v) for mj in mus for v in chain.nu), start=1 + 0j)
    d_lam = math.prod((bracket(lams[i] - lams[j]) for i, j in combinations(range(n), 2)), start=1 + 0j)
    d_mu = math.prod((bracket(mus[j] - mus[i]) for i, j in combinations(range(n), 2)), start=1 + 0j)
    return pre / (d_lam * d_mu) * determinant(slavnov_matrix(chain, lams, mus))


def _rho_factors(data: ExponentiatedData, j: int):
    y, q = data.y, data.q
    yj = y[j - 1]
    others = [y[m] for m in range(data.n) if m != j - 1]
    a = math.prod((yj * q - zm / q for zm in data.z), start=1 + 0j)
    a *= math.prod((yj - yn * q**2 for yn in others), start=1 + 0j)
    b = math.prod((yj * q - zm * q for zm in data.z), start=1 + 0j)
    b *= math.prod((yj - yn / q**2 for yn in others), start=1 + 0j)
    s1 = MiwaMultiset.of([-yn / q**2 for yn in others] + [-zm for zm in data.z])
    s2 = MiwaMultiset.of([-yn * q**2 for yn in others] + [-zm / q**2 for zm in data.z])
    return a, b, s1, s2


def rho(data: ExponentiatedData, l: int, j: int) -> complex:
    """``rho_lj`` (1-based ``l`` and ``j``)."""
    if not 1 <= j <= data.n:
        raise IndexError(f"j must lie in 1..{data.n}, got {j}")
    a, b, s1, s2 = _rho_factors(data, j)
    deg = data.L + data.n - l
    return a * elem_sym(s1, deg) - b * elem_sym(s2, deg)


def kappa(data: ExponentiatedData, k: int, j: int) -> complex:
    """``kappa_kj = -sum_{l<=k} y_j**(l-k-1) rho_lj``."""
    if not 1 <= k <= data.width:
        raise IndexError(f"k must lie in 1..{data.width}, got {k}")
    yj = data.y[j - 1]
    return -sum(yj ** (l - k - 1) * rho(data, l, j) for l in range(1, k + 1))


def kappa_matrix(data: ExponentiatedData) -> np.ndarray:
    """``(N + L - 1) x N`` matrix of ``kappa_kj``."""
    out = np.empty((data.width, data.n), dtype=complex)
    for j in range(1, data.n + 1):
        yj = data.y[j - 1]
        rhos = [rho(data, l, j) for l in range(1, data.width + 1)]
        acc = 0j
        for k in range(1, data.width + 1):
            # running form of the sum: kappa_k = (kappa_{k-1} - rho_k) / y_j
            acc = (acc - rhos[k - 1]) / yj
            out[k - 1, j - 1] = acc
    return out


def casoratian_spec(data: ExponentiatedData) -> CasoratianSpec:
    return CasoratianSpec(kappa_matrix(data).T)


def rewritten_omega(data: ExponentiatedData, xs: Sequence[complex]) -> np.ndarray:
    """``Omega_ij = sum_k x_i**(k-1) kappa_kj``, polynomial in each ``x_i``."""
    kap = kappa_matrix(data)
    powers = np.array([[complex(x) ** (k - 1) for k in range(1, data.width + 1)] for x in xs])
    return powers @ kap


def schur_expansion_terms(data: ExponentiatedData, xs: Sequence[complex]):
    """``(partition, s_lam{x}, det kappa_{lam_i + N + 1 - i, j})`` over the ``N x (L-1)`` box."""
    kap = kappa_matrix(data)
    n = data.n
    x = MiwaMultiset.of(xs)
    out = []
    for lam in partitions_in_box(n, data.L - 1):
        parts = lam.padded(n)
        rows = [parts[i] + n - i - 1 for i in range(n)]
        out.append((lam, schur_jacobi_trudi(lam, x), determinant(kap[rows, :])))
    return out


def schur_expansion(data: ExponentiatedData, xs: Sequence[complex]) -> tuple[complex, int]:
    """Cauchy-Binet sum for ``det Omega``; returns the value and the number of terms."""
    terms = schur_expansion_terms(data, xs)
    total = sum(s * d for _, s, d in terms)
    return vandermonde(xs) * total, len(terms)


def pole_points(data: ExponentiatedData) -> list[complex]:
    """x-values where the Slavnov matrix or its prefactors blow up."""
    q2 = data.q**2
    pts = [yj for yj in data.y] + [yj / q2 for yj in data.y] + [yj * q2 for yj in data.y]
    return pts + list(data.z)


def sample_lambdas(chain: ChainSpec, sol: Roots, count: int, cfg: SampleConfig = SampleConfig()
                   ) -> list[tuple[complex, ...]]:
    """``count`` pole-free sets of free rapidities, drawn in x-space."""
    data = ExponentiatedData.from_chain(chain, sol)
    rng = cfg.rng()
    blocked = pole_points(data)
    return [tuple(cmath.log(x) / 2 for x in sample_points(cfg, data.n, blocked, rng=rng))
            for _ in range(count)]


def ratio_constancy(chain: ChainSpec, sol: Roots, x_samples: Sequence[Sequence[complex]],
                    gauge: bool = True, floor: float = DEFAULT_TOL.abs_floor) -> tuple[complex, float]:
    """Mean and relative spread of oracle / det(omega) over the samples.

    Rewriting brackets in ``x`` pulls ``x_i**((L-1)/2)`` out of every row, so
    with ``gauge=True`` each ratio is multiplied by ``exp((L-1) sum lam)``.
    Samples are given as ``x`` values; ``lam = log(x) / 2``.
    """
    if len(x_samples) < 1:
        raise ValueError("need at least one sample")
    data = ExponentiatedData.from_chain(chain, sol)
    spec = casoratian_spec(data)
    mus = _mus(sol)
    ratios = []
    for xs in x_samples:
        lams = [cmath.log(complex(x)) / 2 for x in xs]
        tau = determinant(omega_matrix(spec.c, MiwaMultiset.of(xs)))
        if abs(tau) <= floor:
            raise DegenerateSampleError(f"det(omega) = {tau} at x = {tuple(xs)}")
        r = scalar_product_oracle(chain, lams, mus) / tau
        if gauge:
            r *= cmath.exp((chain.L - 1) * sum(lams))
        ratios.append(r)
    arr = np.array(ratios)
    mean = complex(arr.mean())
    if abs(mean) <= floor:
        raise DegenerateSampleError("mean ratio vanishes")
    return mean, float(np.max(np.abs(arr - mean)) / abs(mean))
