"""Acceptance criteria 1-9, each evaluated at its stated sizes and tolerances.

Every criterion prints one PASS/FAIL line (collected and echoed at the end of
the pytest run; ``python tests/test_acceptance.py`` prints them directly).
Lines tagged ``extra`` are supplementary runs beyond the stated sizes and do
not change the verdict on the stated criterion.
"""

import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from taubethe import checks as ck
from taubethe.bethe import SolverExhaustedError, canonical_root, solve_bethe
from taubethe.cli import run_verify
from taubethe.config import RunConfig
from taubethe.core import SampleConfig
from taubethe.dkp import TauFunction
from taubethe.symfun import MiwaMultiset
from taubethe.xxz import ChainSpec, eigenstate_check

from conftest import GAMMA, make_chain

LINES: list[str] = []


@dataclass
class Verdict:
    criterion: int
    title: str
    parts: list = field(default_factory=list)  # (label, value, threshold, ok)
    extras: list = field(default_factory=list)

    def part(self, label, value, threshold, ok=None):
        ok = bool(value <= threshold) if ok is None else ok
        self.parts.append((label, float(value), threshold, ok))
        return ok

    def extra(self, label, value, threshold):
        self.extras.append((label, float(value), threshold, bool(value <= threshold)))

    @property
    def ok(self):
        return bool(self.parts) and all(p[3] for p in self.parts)

    def emit(self):
        timed = [p for p in self.parts if p[0] == "runtime seconds"]
        worst = max((p[1] for p in self.parts if p not in timed), default=float("nan"))
        failed = [p[0] for p in self.parts if not p[3]]
        line = f"[{'PASS' if self.ok else 'FAIL'}] criterion {self.criterion} ({self.title}): worst residual {worst:.3e}"
        for _, secs, limit, _ in timed:
            line += f", runtime {secs:.2f} s (limit {limit:.0f} s)"
        if failed:
            line += f"; failing parts: {', '.join(failed)}"
        LINES.append(line)
        for label, value, thr, ok in self.extras:
            LINES.append(f"    extra [{'PASS' if ok else 'FAIL'}] {label}: {value:.3e} (<= {thr:.0e})")
        print(line)
        return self


SOLVE_CFG = SampleConfig(seed=7)
_SOLVED: dict = {}


def solved(L, n):
    """(chain, solutions or None, seconds, exhaustion error)."""
    if (L, n) not in _SOLVED:
        chain = make_chain(L)
        t0 = time.perf_counter()
        try:
            sols, err = solve_bethe(chain, n, SOLVE_CFG, max_solutions=4), None
        except SolverExhaustedError as exc:
            sols, err = None, exc
        _SOLVED[(L, n)] = (chain, sols, time.perf_counter() - t0, err)
    return _SOLVED[(L, n)]


def fixtures(L, n):
    chain, sols, _, _ = solved(L, n)
    if not sols:
        return []
    return [ck.bethe_fixture(f"L{L}N{n}-{k}", chain, s) for k, s in enumerate(sols)]


def missing(v, label):
    """A stated fixture with no Bethe solution is a failed part, never a skipped one."""
    v.part(f"{label}: no Bethe eigenvector found", math.inf, 0.0, ok=False)


# 1


def criterion_1():
    v = Verdict(1, "Slavnov = oracle")
    t0 = time.perf_counter()
    for L, n in [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3), (5, 2)]:
        fxs = fixtures(L, n)
        if not fxs:
            missing(v, f"(L,N)=({L},{n})")
            continue
        for k, fx in enumerate(fxs):
            out = ck.check_oracle_vs_slavnov(fx, 3, ck.substream(1, L, n, k))
            v.part(f"({L},{n}) sol{k}", out.residual, 1e-8)
    elapsed = time.perf_counter() - t0
    v.part("runtime seconds", elapsed, 10.0)
    for k, fx in enumerate(fixtures(5, 3)):
        v.extra(f"(5,3) sol{k}", ck.check_oracle_vs_slavnov(fx, 3, ck.substream(1, 5, 3, k)).residual, 1e-8)
    return v.emit()


# 2


def criterion_2():
    v = Verdict(2, "Bethe solutions are eigenstates")
    probe = -0.37 + 0.52j
    for L, n in [(2, 1), (3, 1), (3, 2), (4, 2), (5, 2), (5, 3)]:
        chain, sols, _, _ = solved(L, n)
        for k, s in enumerate(sols or []):
            v.part(f"({L},{n}) sol{k} eigencheck", max(s.eigencheck, eigenstate_check(chain, s.mus, probe)[0]), 1e-8)
    chain = ChainSpec((0.3,), GAMMA)
    (sol,) = solve_bethe(chain, 1, SampleConfig(seed=1))
    want = canonical_root(0.3 + (1j * np.pi - GAMMA) / 2)
    v.part("L=1 closed-form root", abs(canonical_root(sol.mus[0] - want)), 1e-10)
    return v.emit()


# 3


def criterion_3():
    v = Verdict(3, "symmetric-function suite")
    t0 = time.perf_counter()
    out = ck.check_symfun(SampleConfig(seed=33), evaluations=100)
    elapsed = time.perf_counter() - t0
    for key in ("i1-i2", "i3", "delta", "schur", "character"):
        v.part(key, out.detail[key], 1e-10)
    v.part("runtime seconds", elapsed, 5.0)
    return v.emit()


# 4


def criterion_4():
    v = Verdict(4, "Casoratian column relation")
    for L, n in [(3, 2), (4, 3)]:
        fxs = fixtures(L, n)
        if not fxs:
            missing(v, f"(L,N)=({L},{n})")
        for k, fx in enumerate(fxs):
            v.part(f"({L},{n}) sol{k}", ck.check_casoratian_columns(fx, 5, ck.substream(4, L, k), 3).residual, 1e-9)
    for k, fx in enumerate(fixtures(5, 3)):
        v.extra(f"(5,3) sol{k}", ck.check_casoratian_columns(fx, 5, ck.substream(4, 5, k), 3).residual, 1e-9)
    return v.emit()


# 5


def criterion_5():
    v = Verdict(5, "Schur / Cauchy-Binet expansion")
    for L, n, count in [(3, 2, 6), (4, 2, 10)]:
        fxs = fixtures(L, n)
        if not fxs:
            missing(v, f"(L,N)=({L},{n})")
        for k, fx in enumerate(fxs):
            out = ck.check_schur_expansion(fx, 3, ck.substream(5, L, k))
            v.part(f"({L},{n}) sol{k}", out.residual, 1e-8)
            v.part(f"({L},{n}) term count {out.detail['terms']}", 0.0, 0.0, ok=out.detail["terms"] == count)
    return v.emit()


# 6


def criterion_6():
    v = Verdict(6, "ratio constancy")
    for L, n in [(3, 2), (4, 3)]:
        fxs = fixtures(L, n)
        if not fxs:
            missing(v, f"(L,N)=({L},{n})")
        for k, fx in enumerate(fxs):
            v.part(f"({L},{n}) sol{k}", ck.check_ratio_constancy(fx, 5, ck.substream(6, L, k)).residual, 1e-7)
    for k, fx in enumerate(fixtures(5, 3)):
        v.extra(f"(5,3) sol{k}", ck.check_ratio_constancy(fx, 5, ck.substream(6, 5, k)).residual, 1e-7)
    return v.emit()


# 7

TAU_CHECKS = [("A1", ck.check_a1), ("A2", ck.check_a2), ("bilinear", ck.check_bilinear),
              ("hirota-miwa", ck.check_hirota_miwa), ("laplace", ck.check_laplace)]


def dkp_parts(fx, seed):
    tfs = ck.tau_functions(fx, ck.substream(7, seed), 2)
    return [(name, fn(tfs).residual) for name, fn in TAU_CHECKS]


def random_43():
    chain = make_chain(4)
    return ck.random_fixture("L4N3-random", chain, 3, SampleConfig(seed=77))


def criterion_7():
    v = Verdict(7, "discrete KP identities")
    t0 = time.perf_counter()
    fxs = fixtures(4, 3)
    if not fxs:
        missing(v, "(L,N)=(4,3) Bethe")
    for k, fx in enumerate(fxs):
        for name, res in dkp_parts(fx, k):
            v.part(f"(4,3) sol{k} {name}", res, 1e-8)
    for name, res in dkp_parts(random_43(), 100):
        v.part(f"(4,3) random c {name}", res, 1e-8)
    v.part("runtime seconds", time.perf_counter() - t0, 30.0)
    for k, fx in enumerate(fixtures(5, 3)):
        for name, res in dkp_parts(fx, k):
            v.extra(f"(5,3) sol{k} {name}", res, 1e-8)
    return v.emit()


# 8


def criterion_8():
    v = Verdict(8, "consistency of readings")
    fx = random_43()
    base = MiwaMultiset.of(ck.sample_points(SampleConfig(seed=8), 3))
    tf = TauFunction(fx.spec, base)
    v.part("n=3 cofactor terms vs Hirota-Miwa terms", ck.hirota_term_mismatch(tf, (0, 1, 2)), 1e-8)
    v.part("2N x 2N determinant, N=3", ck.laplace_block_residual(tf, 3).residual, 1e-8)
    for k, bfx in enumerate(fixtures(5, 3)[:1]):
        btf = TauFunction(bfx.spec, base)
        v.extra("(5,3) Bethe cofactor vs Hirota-Miwa", ck.hirota_term_mismatch(btf, (0, 1, 2)), 1e-8)
        v.extra("(5,3) Bethe 2N x 2N determinant", ck.laplace_block_residual(btf, 3).residual, 1e-8)
    return v.emit()


# 9


def criterion_9():
    v = Verdict(9, "determinism")
    cfg = RunConfig()
    a, b = run_verify(cfg).to_json(timing=False), run_verify(cfg).to_json(timing=False)
    v.part("default config reports identical", 0.0 if a == b else 1.0, 0.0)
    c43 = RunConfig.from_dict({"chain": {"L": 4, "nu": "auto"}, "n_roots": 3,
                               "checks": ["hirota-miwa", "oracle-vs-slavnov"]})
    a, b = run_verify(c43).to_json(timing=False), run_verify(c43).to_json(timing=False)
    v.part("(4,3) config reports identical", 0.0 if a == b else 1.0, 0.0)
    return v.emit()


_VERDICTS: dict = {}


def verdict(crit):
    if crit not in _VERDICTS:
        _VERDICTS[crit] = crit()
    return _VERDICTS[crit]


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("crit", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 10)])
def test_acceptance(crit):
    v = verdict(crit)
    failing = [(p[0], p[1]) for p in v.parts if not p[3]]
    assert v.ok, f"criterion {v.criterion} failing parts: {failing}"


def test_acceptance_extras_pass():
    """Supplementary runs at (5,3), the smallest three-root chain with Bethe eigenvectors."""
    extras = []
    for crit in (criterion_1, criterion_4, criterion_6, criterion_7, criterion_8):
        extras += verdict(crit).extras
    assert extras and all(e[3] for e in extras), [e for e in extras if not e[3]]


if __name__ == "__main__":
    for crit in CRITERIA:
        verdict(crit)
