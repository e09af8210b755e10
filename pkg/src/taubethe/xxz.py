"""Dense brute-force XXZ chain: L-operator, monodromy, states, scalar products.

Everything is built as explicit ``2**L x 2**L`` matrices in the
un-exponentiated rapidities with ``[u] = e**u - e**-u``. Basis index 0 is
the all-up reference state; site 1 is the most significant tensor factor
and its L-operator is the leftmost factor of the monodromy product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DEFAULT_TOL, TauBetheError, Tolerance
from .symfun import bracket

MAX_SITES = 12


class DegenerateStateError(TauBetheError, ValueError):
    pass


@dataclass(frozen=True)
class ChainSpec:
    """Inhomogeneous periodic chain: site rapidities ``nu`` and crossing ``gamma``."""

    nu: tuple[complex, ...]
    gamma: complex
    max_sites: int = MAX_SITES

    def __post_init__(self):
        nu = tuple(complex(v) for v in self.nu)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "gamma", complex(self.gamma))
        if not nu:
            raise ValueError("a chain needs at least one site")
        if len(nu) > self.max_sites:
            raise ValueError(f"L = {len(nu)} exceeds the dense cap of {self.max_sites} sites")
        if len(set(nu)) != len(nu):
            raise ValueError("site rapidities must be pairwise distinct")
        if abs(bracket(self.gamma)) <= DEFAULT_TOL.rel:
            raise ValueError("[gamma] vanishes; the chain is degenerate")

    @property
    def L(self) -> int:
        return len(self.nu)

    @property
    def dim(self) -> int:
        return 2 ** self.L

    def z(self) -> np.ndarray:
        return np.exp(2 * np.array(self.nu))

    def q(self) -> complex:
        return complex(np.exp(self.gamma))

    def vacuum_a(self, lam: complex) -> complex:
        """Eigenvalue of A(lam) on the reference state."""
        return complex(np.prod([bracket(lam - n + self.gamma) for n in self.nu]))

    def vacuum_d(self, lam: complex) -> complex:
        return complex(np.prod([bracket(lam - n) for n in self.nu]))


def l_operator(lam: complex, nu: complex, gamma: complex) -> np.ndarray:
    """4x4 L-operator in the basis (aux, site) = uu, ud, du, dd."""
    a = bracket(lam - nu + gamma)
    b = bracket(lam - nu)
    c = bracket(gamma)
    return np.array([[a, 0, 0, 0],
                     [0, b, c, 0],
                     [0, c, b, 0],
                     [0, 0, 0, a]], dtype=complex)


def _aux_blocks(op4: np.ndarray) -> list[list[np.ndarray]]:
    # op4[(a, i), (b, j)] -> blocks[a][b][i, j]
    t = op4.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3)
    return [[t[a, b] for b in range(2)] for a in range(2)]


@dataclass(frozen=True)
class Monodromy:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def transfer(self) -> np.ndarray:
        return self.A + self.D


def monodromy(chain: ChainSpec, lam: complex) -> Monodromy:
    blocks = [[np.ones((1, 1), complex), np.zeros((1, 1), complex)],
              [np.zeros((1, 1), complex), np.ones((1, 1), complex)]]
    for nu in chain.nu:
        site = _aux_blocks(l_operator(lam, nu, chain.gamma))
        blocks = [[sum(np.kron(blocks[a][c], site[c][b]) for c in range(2))
                   for b in range(2)] for a in range(2)]
    return Monodromy(blocks[0][0], blocks[0][1], blocks[1][0], blocks[1][1])


def transfer(chain: ChainSpec, lam: complex) -> np.ndarray:
    return monodromy(chain, lam).transfer()


def reference_state(chain: ChainSpec) -> np.ndarray:
    v = np.zeros(chain.dim, dtype=complex)
    v[0] = 1.0
    return v


def build_state(chain: ChainSpec, mus: Sequence[complex]) -> np.ndarray:
    """``B(mu_1) ... B(mu_N)|0>``; identically zero when N > L."""
    v = reference_state(chain)
    for mu in reversed(list(mus)):
        v = monodromy(chain, mu).B @ v
    return v


def build_dual_state(chain: ChainSpec, lams: Sequence[complex]) -> np.ndarray:
    """Row vector ``<0| C(lam_1) ... C(lam_N)``."""
    w = reference_state(chain)
    for lam in lams:
        w = w @ monodromy(chain, lam).C
    return w


def scalar_product_oracle(chain: ChainSpec, lams: Sequence[complex], mus: Sequence[complex]) -> complex:
    if len(lams) != len(mus):
        raise ValueError("dual and ordinary states need the same number of rapidities")
    return complex(build_dual_state(chain, lams) @ build_state(chain, mus))


def eigenstate_check(chain: ChainSpec, mus: Sequence[complex], lam_probe: complex,
                     tol: Tolerance = DEFAULT_TOL) -> tuple[float, complex]:
    """Residual ``|T v - E v| / |T v|`` and Rayleigh quotient ``E``."""
    v = build_state(chain, mus)
    norm = np.linalg.norm(v)
    if norm <= tol.abs_floor:
        raise DegenerateStateError("Bethe vector has zero norm")
    tv = transfer(chain, lam_probe) @ v
    e = complex(np.vdot(v, tv) / np.vdot(v, v))
    denom = max(float(np.linalg.norm(tv)), tol.abs_floor)
    return float(np.linalg.norm(tv - e * v) / denom), e


def commutator_residual(x: np.ndarray, y: np.ndarray) -> float:
    xy = x @ y
    scale = max(np.linalg.norm(xy), np.linalg.norm(y @ x), DEFAULT_TOL.abs_floor)
    return float(np.linalg.norm(xy - y @ x) / scale)
