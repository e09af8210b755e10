import cmath

import numpy as np
import pytest

from taubethe.bethe import (BetheSolution, DegenerateInputError, SolverExhaustedError, bethe_defect, bethe_eigenvalue,
                            bethe_jacobian, canonical_root, canonical_roots, defect_mass, solve_bethe)
from taubethe.core import SampleConfig
from taubethe.xxz import ChainSpec, eigenstate_check

from conftest import GAMMA, bethe_fixtures, make_chain


def closed_form(nu, g):
    return canonical_root(nu + (1j * np.pi - g) / 2)


def test_single_site_closed_form():
    ch = ChainSpec((0.3,), GAMMA)
    mu = closed_form(0.3, GAMMA)
    assert abs(bethe_defect(ch, [mu])[0]) < 1e-14
    (sol,) = solve_bethe(ch, 1, SampleConfig(seed=1))
    assert abs(canonical_root(sol.mus[0] - mu)) < 1e-10


def test_defect_errors_and_negative_control():
    ch = make_chain(3)
    with pytest.raises(DegenerateInputError):
        bethe_defect(ch, [0.2, 0.2])
    assert defect_mass(ch, [0.11 + 0.3j, -0.4 + 0.2j]) > 1e-3


def test_jacobian_matches_finite_differences(rng):
    ch = make_chain(4)
    mus = rng.normal(size=3) + 1j * rng.normal(size=3)
    jac = bethe_jacobian(ch, mus)
    h = 1e-6
    for k in range(3):
        e = np.zeros(3, dtype=complex)
        e[k] = h
        fd = (bethe_defect(ch, mus + e) - bethe_defect(ch, mus - e)) / (2 * h)
        assert np.allclose(jac[:, k], fd, rtol=1e-6, atol=1e-8)


def test_canonical_root_range():
    for im in [-7.0, -np.pi / 2, 0.3, np.pi / 2, 4.0]:
        r = canonical_root(complex(0.1, im))
        assert -np.pi / 2 < r.imag <= np.pi / 2 + 1e-15
        assert abs(cmath.exp(2j * (r.imag - im)) - 1) < 1e-12
    assert canonical_roots([0.5, 0.1j, -0.2]) == (-0.2 + 0j, 0.1j, 0.5 + 0j)


@pytest.mark.parametrize("L,n", [(2, 1), (3, 1), (3, 2), (4, 2), (5, 2), (5, 3)])
def test_solutions_are_eigenstates(L, n):
    chain, sols = bethe_fixtures(L, n)
    assert sols
    for s in sols:
        assert isinstance(s, BetheSolution) and s.n == n
        assert s.residual <= 1e-10
        assert s.eigencheck <= 1e-8
        res, _ = eigenstate_check(chain, s.mus, -0.21 + 0.43j)
        assert res <= 1e-8
        assert defect_mass(chain, s.mus) <= 1e-10
        _, e = eigenstate_check(chain, s.mus, 0.52 - 0.1j)
        assert abs(bethe_eigenvalue(chain, s.mus, 0.52 - 0.1j) - e) <= 1e-8 * abs(e)
        if n > 1:
            diffs = [abs(canonical_root(a - b)) for i, a in enumerate(s.mus) for b in s.mus[i + 1:]]
            assert min(diffs) >= 0.05


def test_solutions_sorted_and_distinct():
    _, sols = bethe_fixtures(4, 2, 4)
    keys = [[(z.real, z.imag) for z in s.mus] for s in sols]
    assert keys == sorted(keys)
    assert len({s.mus for s in sols}) == len(sols)


def test_one_root_count_bounded_by_sites():
    chain = make_chain(3)
    sols = solve_bethe(chain, 1, SampleConfig(seed=2), max_solutions=10, max_starts=300)
    assert 1 <= len(sols) <= 3


def test_reproducible_for_fixed_seed():
    chain = make_chain(3)
    a = solve_bethe(chain, 2, SampleConfig(seed=9))
    b = solve_bethe(chain, 2, SampleConfig(seed=9))
    assert [s.mus for s in a] == [s.mus for s in b]


def test_site_permutation_gives_same_solutions():
    chain = make_chain(3)
    perm = ChainSpec(chain.nu[::-1], chain.gamma)
    sols = solve_bethe(chain, 1, SampleConfig(seed=2), max_solutions=10, max_starts=300)
    other = solve_bethe(perm, 1, SampleConfig(seed=2), max_solutions=10, max_starts=300)
    a = [s.mus[0] for s in sols]
    assert len(a) == len(other)
    for s in other:
        assert min(abs(canonical_root(s.mus[0] - m)) for m in a) < 1e-8


def test_beyond_equator_even_chain_exhausts():
    chain = make_chain(4)
    with pytest.raises(SolverExhaustedError) as info:
        solve_bethe(chain, 3, SampleConfig(seed=7), max_starts=60)
    assert info.value.rejected


def test_full_sector_roots_must_predict_eigenvalue():
    # the all-down sector is one-dimensional, so the eigencheck alone accepts any nonzero vector
    chain = make_chain(2)
    with pytest.raises(SolverExhaustedError) as info:
        solve_bethe(chain, 2, SampleConfig(seed=7), max_starts=60)
    assert info.value.rejected.get("eigenvalue-mismatch", 0) >= 1


def test_too_many_roots_rejected():
    with pytest.raises(ValueError):
        solve_bethe(make_chain(2), 3)
