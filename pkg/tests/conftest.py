import functools
import sys

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from taubethe.bethe import solve_bethe
from taubethe.core import SampleConfig
from taubethe.xxz import ChainSpec

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

GAMMA = 0.4 + 0.15j


def make_chain(L: int, seed: int = 42) -> ChainSpec:
    rng = np.random.default_rng(seed + L)
    return ChainSpec(tuple(rng.uniform(0.1, 1.0, size=L)), GAMMA)


@functools.lru_cache(maxsize=None)
def bethe_fixtures(L: int, n: int, max_solutions: int = 2):
    chain = make_chain(L)
    return chain, tuple(solve_bethe(chain, n, SampleConfig(seed=7), max_solutions=max_solutions))


def annulus_points(n, lo=0.5, hi=2.0, sep=0.05):
    """Hypothesis strategy for ``n`` separated complex points in the sampling annulus."""
    pt = st.builds(lambda r, phi: complex(r * np.cos(phi), r * np.sin(phi)),
                   st.floats(lo, hi), st.floats(-np.pi, np.pi))
    return st.lists(pt, min_size=n, max_size=n).filter(
        lambda xs: all(abs(a - b) >= sep for i, a in enumerate(xs) for b in xs[i + 1:]))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
