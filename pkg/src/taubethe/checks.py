"""Verification checks over Bethe fixtures and random coefficient matrices.

Each check returns an :class:`Outcome` holding the worst residual seen over
its instance grid; the CLI wraps outcomes into report records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Sequence

import numpy as np

from .bethe import BetheSolution
from .core import SampleConfig, determinant, normalized_residual, relative_error, sample_points
from .dkp import (CasoratianSpec, IdentityCheck, TauFunction, bilinear_cofactor_terms, bilinear_det_residual,
                  bilinear_matrix, casoratian_column_residual, hirota_miwa_residual, hirota_miwa_terms,
                  identity_a1, identity_a2, laplace_block_residual, laplace_identity_residual)
from .slavnov import (ExponentiatedData, casoratian_spec, ratio_constancy, rewritten_omega, sample_lambdas,
                      schur_expansion, slavnov_det)
from .symfun import (MiwaMultiset, char_poly, complete_sym, complete_sym_series, discrete_derivative,
                     miwa_times, Partition, partitions_in_box, schur_bialternant, schur_jacobi_trudi)
from .xxz import ChainSpec, scalar_product_oracle


@dataclass
class Outcome:
    residual: float = 0.0
    degenerate: bool = False
    detail: dict = field(default_factory=dict)
    _count: int = 0
    _degenerate: int = 0

    def add(self, value: float | IdentityCheck) -> None:
        if isinstance(value, IdentityCheck):
            self._count += 1
            if value.degenerate:
                self._degenerate += 1
                return
            value = value.residual
        else:
            self._count += 1
        self.residual = max(self.residual, float(value))

    def finish(self, **detail) -> "Outcome":
        self.detail.update(detail)
        self.detail["instances"] = self._count
        if self._degenerate:
            self.detail["degenerate_instances"] = self._degenerate
        self.degenerate = self._count > 0 and self._degenerate == self._count
        return self


def substream(seed: int, *keys: int) -> SampleConfig:
    """Independent, reproducible sampler config for one part of a run."""
    state = np.random.SeedSequence([seed, *keys]).generate_state(1, np.uint64)[0]
    return SampleConfig(seed=int(state))


@dataclass(frozen=True)
class Fixture:
    id: str
    chain: ChainSpec
    spec: CasoratianSpec
    sol: BetheSolution | None = None

    @property
    def n(self) -> int:
        return self.spec.n


def bethe_fixture(fid: str, chain: ChainSpec, sol: BetheSolution) -> Fixture:
    return Fixture(fid, chain, casoratian_spec(ExponentiatedData.from_chain(chain, sol)), sol)


def random_fixture(fid: str, chain: ChainSpec, n: int, cfg: SampleConfig) -> Fixture:
    return Fixture(fid, chain, CasoratianSpec.random(n, n + chain.L - 1, cfg.rng()))


def x_sets(fx: Fixture, count: int, cfg: SampleConfig) -> list[list[complex]]:
    lams = sample_lambdas(fx.chain, fx.sol, count, cfg)
    return [[complex(np.exp(2 * lam)) for lam in ls] for ls in lams]


def mult_patterns(k: int, max_mult: int) -> list[tuple[int, ...]]:
    return list(product(range(1, max_mult + 1), repeat=k))


def tau_functions(fx: Fixture, cfg: SampleConfig, max_mult: int) -> list[TauFunction]:
    """Tau-functions on a base of ``max(N, 3)`` sampled values over all multiplicity patterns."""
    k = max(fx.n, 3)
    vals = sample_points(cfg, k)
    return [TauFunction(fx.spec, MiwaMultiset.of(vals, m)) for m in mult_patterns(k, max_mult)]


# Bethe-side checks


def check_oracle_vs_slavnov(fx: Fixture, count: int, cfg: SampleConfig) -> Outcome:
    out = Outcome()
    for lams in sample_lambdas(fx.chain, fx.sol, count, cfg):
        out.add(relative_error(slavnov_det(fx.chain, lams, fx.sol), scalar_product_oracle(fx.chain, lams, fx.sol.mus)))
    return out.finish(lambda_sets=count)


def check_schur_expansion(fx: Fixture, count: int, cfg: SampleConfig) -> Outcome:
    out = Outcome()
    data = ExponentiatedData.from_chain(fx.chain, fx.sol)
    terms = 0
    for xs in x_sets(fx, count, cfg):
        value, terms = schur_expansion(data, xs)
        out.add(relative_error(value, determinant(rewritten_omega(data, xs))))
    return out.finish(terms=terms)


def check_casoratian_columns(fx: Fixture, count: int, cfg: SampleConfig, max_mult: int) -> Outcome:
    out = Outcome()
    c = fx.spec.c
    rng = cfg.rng()
    for _ in range(count):
        vals = sample_points(cfg, fx.n, rng=rng)
        x = MiwaMultiset.of(vals, rng.integers(1, max_mult + 1, size=fx.n))
        for i in range(1, fx.n + 1):
            for j in range(1, fx.spec.width):
                for m in range(len(x)):
                    out.add(casoratian_column_residual(c, x, i, j, m))
    return out.finish(sigma_min=fx.spec.smallest_singular_value())


def check_ratio_constancy(fx: Fixture, count: int, cfg: SampleConfig) -> Outcome:
    out = Outcome()
    mean, spread = ratio_constancy(fx.chain, fx.sol, x_sets(fx, count, cfg))
    out.add(spread)
    return out.finish(mean_ratio=[mean.real, mean.imag], x_sets=count)


# Casoratian identities


def check_a1(tfs: Sequence[TauFunction]) -> Outcome:
    out = Outcome()
    for tf in tfs:
        for n in range(2, tf.n + 1):
            for var in range(len(tf.base)):
                out.add(identity_a1(tf, n, var))
    return out.finish()


def check_a2(tfs: Sequence[TauFunction]) -> Outcome:
    out = Outcome()
    for tf in tfs:
        for n in range(2, tf.n + 1):
            for chosen in combinations(range(len(tf.base)), n):
                out.add(identity_a2(tf, n, chosen))
    return out.finish()


def hirota_term_mismatch(tf: TauFunction, triple: Sequence[int]) -> float:
    """Spread of the cofactor / Hirota-Miwa term ratios (all equal to -1 when the readings agree)."""
    cof = bilinear_cofactor_terms(bilinear_matrix(tf, triple))
    hm = hirota_miwa_terms(tf, triple)
    return max(abs(a + b) for a, b in zip(cof, hm)) / max(sum(abs(b) for b in hm), 1e-300)


def check_bilinear(tfs: Sequence[TauFunction]) -> Outcome:
    out = Outcome()
    mismatch = 0.0
    for tf in tfs:
        for n in range(3, tf.n + 1):
            for chosen in combinations(range(len(tf.base)), n):
                out.add(bilinear_det_residual(tf, chosen))
        for triple in combinations(range(len(tf.base)), 3):
            mismatch = max(mismatch, hirota_term_mismatch(tf, triple))
    out.add(mismatch)
    return out.finish(term_mismatch=mismatch)


def check_hirota_miwa(tfs: Sequence[TauFunction]) -> Outcome:
    out = Outcome()
    for tf in tfs:
        for triple in combinations(range(len(tf.base)), 3):
            out.add(hirota_miwa_residual(tf, triple))
    return out.finish(max_multiplicity=max(max(tf.base.mults) for tf in tfs) if tfs else 0)


def check_laplace(tfs: Sequence[TauFunction]) -> Outcome:
    out = Outcome()
    block = 0.0
    for tf in tfs:
        for n in range(3, tf.n + 1):
            for chosen in combinations(range(len(tf.base)), n):
                out.add(laplace_identity_residual(tf, n, chosen))
                if tf.n <= 4:
                    block = max(block, laplace_block_residual(tf, n, chosen).residual)
    out.add(block)
    return out.finish(block_residual=block)


# Symmetric functions


def jacobi_trudi_mass(lam: Partition, x: MiwaMultiset, h: Sequence[complex] | None = None) -> float:
    """Sum of the moduli of all terms in the Jacobi-Trudi determinant (its permanent on ``|h|``)."""
    n = max(lam.length(), 1)
    parts = lam.padded(n)
    if h is None:
        h = complete_sym_series(x, parts[0] + n)
    h = np.abs(np.asarray(h))
    mat = [[h[parts[i] - i + j] if parts[i] - i + j >= 0 else 0.0 for j in range(n)] for i in range(n)]
    return float(sum(math.prod(mat[i][p[i]] for i in range(n))
                     for p in permutations(range(n))))


def schur_agreement(lam: Partition, x: MiwaMultiset, h: Sequence[complex] | None = None) -> tuple[float, float]:
    """Bialternant vs Jacobi-Trudi: (term-mass residual, plain relative error).

    ``h`` optionally supplies ``h_0 .. h_k`` of ``x`` up to at least ``lam_1 + len(lam)``.
    """
    a, b = schur_bialternant(lam, x), schur_jacobi_trudi(lam, x)
    return abs(a - b) / max(abs(a), abs(b), jacobi_trudi_mass(lam, x, h), 1e-300), relative_error(a, b)


def _random_multiset(rng: np.random.Generator, cfg: SampleConfig, k: int, max_mult: int) -> MiwaMultiset:
    return MiwaMultiset.of(sample_points(cfg, k, rng=rng), rng.integers(1, max_mult + 1, size=k))


def check_symfun(cfg: SampleConfig, evaluations: int = 5, degree: int = 6) -> Outcome:
    """(i1)-(i3), the discrete derivative, bialternant vs Jacobi-Trudi, characters vs Schur."""
    rng = cfg.rng()
    out = Outcome()
    parts = {}
    for _ in range(evaluations):
        x = _random_multiset(rng, cfg, 3, 3)
        h = complete_sym_series(x, degree)
        worst = 0.0
        for m in range(len(x)):
            xm = x.values[m]
            hr = complete_sym_series(x.without_one(m), degree)
            hd = complete_sym_series(x.shifted([m]), degree)
            delta = discrete_derivative(x, m)
            for i in range(degree + 1):
                prev_h = h[i - 1] if i else 0j
                prev_hd = hd[i - 1] if i else 0j
                worst = max(worst, normalized_residual([h[i], -hr[i], -xm * prev_h]))
                worst = max(worst, normalized_residual([h[i], -hd[i], xm * prev_hd]))
                parts["delta"] = max(parts.get("delta", 0.0), relative_error(delta(i), prev_h))
        parts["i1-i2"] = max(parts.get("i1-i2", 0.0), worst)
        x1, x2 = x.values[0], x.values[1]
        both = x.shifted([0, 1])
        for i in range(degree + 1):
            parts["i3"] = max(parts.get("i3", 0.0), normalized_residual(
                [(x2 - x1) * complete_sym(both, i), -x2 * complete_sym(x.shifted([1]), i),
                 x1 * complete_sym(x.shifted([0]), i)]))
    box = list(partitions_in_box(4, 6))
    for _ in range(evaluations):
        x = MiwaMultiset.of(sample_points(cfg, 4, rng=rng))
        h = complete_sym_series(x, 10)
        for lam in box:
            res, rel = schur_agreement(lam, x, h)
            parts["schur"] = max(parts.get("schur", 0.0), res)
            parts["schur_plain_relative"] = max(parts.get("schur_plain_relative", 0.0), rel)
    for _ in range(evaluations):
        x = _random_multiset(rng, cfg, 3, 2)
        t = miwa_times(x, 7)
        for lam in partitions_in_box(3, 4):
            parts["character"] = max(parts.get("character", 0.0),
                                     relative_error(char_poly(lam, t), schur_jacobi_trudi(lam, x)))
    for k, v in parts.items():
        if k != "schur_plain_relative":
            out.add(v)
    return out.finish(**parts, evaluations=evaluations)
