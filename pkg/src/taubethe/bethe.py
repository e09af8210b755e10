"""Bethe equations in polynomial form and a multi-start Newton solver."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .core import SampleConfig, TauBetheError
from .symfun import bracket
from .xxz import ChainSpec, DegenerateStateError, build_state, eigenstate_check

EIGEN_TOL = 1e-8
DEFECT_TOL = 1e-10


class DegenerateInputError(TauBetheError, ValueError):
    pass


class SolverExhaustedError(TauBetheError, RuntimeError):
    def __init__(self, message: str, best_defect: float, rejected: dict[str, int] | None = None):
        super().__init__(message)
        self.best_defect = best_defect
        self.rejected = dict(rejected or {})


@dataclass(frozen=True)
class BetheSolution:
    mus: tuple[complex, ...]
    residual: float
    eigencheck: float
    eigenvalue_probe: complex = 0j
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def n(self) -> int:
        return len(self.mus)


def _cosh2(u: complex) -> complex:
    # derivative of the bracket
    e = cmath.exp(u)
    return e + 1 / e


def _product_and_grad(args: Sequence[complex]) -> tuple[complex, np.ndarray]:
    """``prod [u_t]`` and its derivative in each ``u_t``, without dividing."""
    vals = [bracket(u) for u in args]
    prod = math.prod(vals, start=1 + 0j)
    grad = np.empty(len(vals), dtype=complex)
    for t, u in enumerate(args):
        grad[t] = _cosh2(u) * math.prod(vals[:t] + vals[t + 1:], start=1 + 0j)
    return prod, grad


def _check_distinct(mus: Sequence[complex]) -> None:
    for a, b in combinations(mus, 2):
        if abs(bracket(a - b)) == 0.0:
            raise DegenerateInputError(f"coincident roots {a} and {b}")


def _defect_terms(chain: ChainSpec, mus: Sequence[complex], i: int):
    mu = mus[i]
    g = chain.gamma
    others = [mus[j] for j in range(len(mus)) if j != i]
    left = right = 1 + 0j
    for n in chain.nu:
        left *= bracket(mu - n + g)
        right *= bracket(mu - n)
    for m in others:
        left *= bracket(mu - m - g)
        right *= bracket(mu - m + g)
    return left, right


def bethe_defect(chain: ChainSpec, mus: Sequence[complex]) -> np.ndarray:
    """``G_i = a(mu_i) prod_j [mu_i-mu_j-g] - d(mu_i) prod_j [mu_i-mu_j+g]``."""
    mus = [complex(m) for m in mus]
    _check_distinct(mus)
    out = np.empty(len(mus), dtype=complex)
    for i in range(len(mus)):
        left, right = _defect_terms(chain, mus, i)
        out[i] = left - right
    return out


def defect_mass(chain: ChainSpec, mus: Sequence[complex]) -> float:
    """Largest ``|G_i|`` relative to the size of its two terms."""
    mus = [complex(m) for m in mus]
    worst = 0.0
    for i in range(len(mus)):
        left, right = _defect_terms(chain, mus, i)
        worst = max(worst, abs(left - right) / max(abs(left) + abs(right), 1e-300))
    return worst


def bethe_jacobian(chain: ChainSpec, mus: Sequence[complex]) -> np.ndarray:
    mus = [complex(m) for m in mus]
    n = len(mus)
    g = chain.gamma
    jac = np.zeros((n, n), dtype=complex)
    for i, mu in enumerate(mus):
        others = [j for j in range(n) if j != i]
        a, da = _product_and_grad([mu - v + g for v in chain.nu])
        d, dd = _product_and_grad([mu - v for v in chain.nu])
        pm, dpm = _product_and_grad([mu - mus[j] - g for j in others])
        pp, dpp = _product_and_grad([mu - mus[j] + g for j in others])
        jac[i, i] = (da.sum() * pm + a * dpm.sum()) - (dd.sum() * pp + d * dpp.sum())
        for t, j in enumerate(others):
            jac[i, j] = -a * dpm[t] + d * dpp[t]
    return jac


def bethe_eigenvalue(chain: ChainSpec, mus: Sequence[complex], lam: complex) -> complex:
    """Transfer eigenvalue predicted by the roots: ``a prod [lam-mu-g]/[lam-mu] + d prod [lam-mu+g]/[lam-mu]``."""
    g = chain.gamma
    up = math.prod((bracket(lam - m - g) / bracket(lam - m) for m in mus), start=1 + 0j)
    down = math.prod((bracket(lam - m + g) / bracket(lam - m) for m in mus), start=1 + 0j)
    return chain.vacuum_a(lam) * up + chain.vacuum_d(lam) * down


def canonical_root(mu: complex) -> complex:
    """Representative of ``mu`` modulo ``i*pi`` with imaginary part in (-pi/2, pi/2]."""
    im = mu.imag
    im = im - np.pi * np.ceil((im - np.pi / 2) / np.pi)
    return complex(mu.real, im)


def canonical_roots(mus: Sequence[complex]) -> tuple[complex, ...]:
    return tuple(sorted((canonical_root(complex(m)) for m in mus), key=lambda z: (z.real, z.imag)))


def _root_distance(a: complex, b: complex) -> float:
    d = canonical_root(a - b)
    return abs(d)


def newton(chain: ChainSpec, start: Sequence[complex], max_iter: int = 80,
           max_halvings: int = 30, tol: float = 1e-14) -> tuple[np.ndarray, float]:
    """Damped Newton on the polynomial-form defect; returns roots and final mass."""
    mus = np.array(start, dtype=complex)
    try:
        g = bethe_defect(chain, mus)
    except DegenerateInputError:
        return mus, np.inf
    norm = np.linalg.norm(g)
    for _ in range(max_iter):
        try:
            step = np.linalg.solve(bethe_jacobian(chain, mus), g)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        t = 1.0
        for _ in range(max_halvings):
            trial = mus - t * step
            try:
                gt = bethe_defect(chain, trial)
            except DegenerateInputError:
                gt = None
            if gt is not None and np.all(np.isfinite(gt)) and np.linalg.norm(gt) < norm:
                break
            t *= 0.5
        else:
            break
        mus, g, norm = trial, gt, np.linalg.norm(gt)
        if np.max(np.abs(t * step)) < tol * max(1.0, np.max(np.abs(mus))):
            break
    try:
        mass = defect_mass(chain, mus)
    except DegenerateInputError:
        mass = np.inf
    return mus, mass


def _seed(chain: ChainSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    nu = np.array(chain.nu)
    base = rng.choice(nu, size=n)
    shift = rng.integers(-2, 3, size=n) * chain.gamma / 2
    half = rng.integers(0, 2, size=n) * 1j * np.pi / 2
    jitter = 0.15 * (rng.normal(size=n) + 1j * rng.normal(size=n))
    return base + shift + half + jitter


def _admissible(chain: ChainSpec, mus: Sequence[complex], min_sep: float) -> str | None:
    if not np.all(np.isfinite(mus)):
        return "diverged"
    if np.max(np.abs(np.real(mus))) > 12:
        return "diverged"
    for a, b in combinations(mus, 2):
        if _root_distance(a, b) < min_sep:
            return "collision"
        if min(abs(bracket(a - b + chain.gamma)), abs(bracket(a - b - chain.gamma))) < min_sep:
            return "singular"
    return None


def solve_bethe(chain: ChainSpec, n: int, cfg: SampleConfig = SampleConfig(),
                max_solutions: int = 4, max_starts: int = 400,
                probe: complex | None = None) -> list[BetheSolution]:
    """Distinct Bethe solutions with ``n`` roots, each verified as a transfer eigenstate.

    Newton starts are seeded from ``cfg.seed``. Candidates are rejected when
    roots collide, sit on a singular pair ``mu_i - mu_j = +-gamma``, give a
    Bethe vector that is not an eigenstate (this includes the zero vector), or
    predict an eigenvalue different from the observed one.
    """
    if not 1 <= n <= chain.L:
        raise ValueError(f"need 1 <= n <= L = {chain.L}, got n = {n}")
    rng = cfg.rng()
    lam_probe = complex(0.31 + 0.17j) if probe is None else complex(probe)
    found: list[BetheSolution] = []
    keys: list[tuple[complex, ...]] = []
    rejected: dict[str, int] = {}
    best = np.inf
    for _ in range(max_starts):
        mus, mass = newton(chain, _seed(chain, n, rng))
        best = min(best, mass)
        if not mass <= DEFECT_TOL:
            rejected["no-convergence"] = rejected.get("no-convergence", 0) + 1
            continue
        reason = _admissible(chain, mus, cfg.min_separation)
        if reason is not None:
            rejected[reason] = rejected.get(reason, 0) + 1
            continue
        key = canonical_roots(mus)
        if any(max(_root_distance(a, b) for a, b in zip(key, k)) < cfg.min_separation for k in keys):
            continue
        try:
            resid, ev = eigenstate_check(chain, key, lam_probe)
        except DegenerateStateError:
            resid, ev = np.inf, 0j
        if not resid <= EIGEN_TOL:
            rejected["not-eigenstate"] = rejected.get("not-eigenstate", 0) + 1
            keys.append(key)
            continue
        keys.append(key)
        # in a one-dimensional sector every nonzero vector is an eigenstate; the roots
        # must also predict the observed eigenvalue
        mismatch = abs(bethe_eigenvalue(chain, key, lam_probe) - ev) / max(abs(ev), 1e-300)
        if not mismatch <= EIGEN_TOL:
            rejected["eigenvalue-mismatch"] = rejected.get("eigenvalue-mismatch", 0) + 1
            continue
        found.append(BetheSolution(key, float(mass), float(resid), ev,
                                   meta={"state_norm": float(np.linalg.norm(build_state(chain, key))),
                                         "eigenvalue_mismatch": float(mismatch)}))
        if len(found) >= max_solutions:
            break
    if not found:
        raise SolverExhaustedError(
            f"no verified Bethe solution with N={n} on L={chain.L} after {max_starts} starts "
            f"(best defect {best:.3g}, rejected {rejected})", float(best), rejected)
    found.sort(key=lambda s: [(z.real, z.imag) for z in s.mus])
    return found
