import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from taubethe.core import DimensionError, SampleConfig, determinant, relative_error, sample_points
from taubethe.dkp import (CasoratianSpec, IdentityCheck, TauFunction, bilinear_cofactor_terms,
                          bilinear_det_residual, bilinear_matrix, casoratian_column_residual, hirota_miwa_residual,
                          hirota_miwa_terms, identity_a1, identity_a2, laplace_block_matrix, laplace_block_residual,
                          laplace_identity_residual, laplace_minor_terms, laplace_terms, omega_a1_residual,
                          omega_a2_residual, omega_entry, omega_matrix, tau, tau_shift)
from taubethe.slavnov import ExponentiatedData, casoratian_spec, rewritten_omega
from taubethe.symfun import MiwaMultiset, complete_sym, vandermonde

from conftest import bethe_fixtures

seeds = st.integers(0, 2**32)


def random_tau(seed, n=3, L=4, k=None, mults=None):
    r = np.random.default_rng(seed)
    spec = CasoratianSpec.random(n, n + L - 1, r)
    k = max(n, 3) if k is None else k
    vals = sample_points(SampleConfig(seed=seed), k)
    return TauFunction(spec, MiwaMultiset.of(vals, mults))


def bethe_tau(L=5, n=3, seed=0, mults=None):
    chain, (sol, *_) = bethe_fixtures(L, n)
    spec = casoratian_spec(ExponentiatedData.from_chain(chain, sol))
    vals = sample_points(SampleConfig(seed=seed), max(n, 3))
    return TauFunction(spec, MiwaMultiset.of(vals, mults))


def test_spec_validation():
    with pytest.raises(DimensionError):
        CasoratianSpec(np.ones((3, 2)))
    with pytest.raises(DimensionError):
        CasoratianSpec(np.ones(3))
    spec = CasoratianSpec(np.ones((2, 4)))
    assert (spec.n, spec.width) == (2, 4)


def test_single_row_tau_is_omega_entry():
    c = np.array([[1.0, 2.0 - 1j, 0.5j]])
    x = MiwaMultiset.of([0.7, -1.2j])
    tf = TauFunction(CasoratianSpec(c), x)
    want = sum(c[0, k - 1] * complete_sym(x, k - 1) for k in range(1, 4))
    assert relative_error(tau(tf), want) < 1e-14
    assert relative_error(omega_entry(c, x, 1, 1), want) < 1e-14


@given(seeds)
def test_tau_permutation_invariant(seed):
    tf = random_tau(seed, mults=[1, 2, 1])
    ref = tau(tf)
    for perm in itertools.permutations(range(3)):
        base = MiwaMultiset(tuple(tf.base.entries[p] for p in perm))
        assert relative_error(tau(TauFunction(tf.spec, base)), ref) < 1e-10


@given(seeds)
def test_shift_order_independence(seed):
    tf = random_tau(seed)
    both = tau_shift(tf, [0, 1])
    assert tau_shift(tf, []) == tau(tf)
    assert relative_error(tau_shift(tf, [1, 0]), both) < 1e-13
    stepped = TauFunction(tf.spec, tf.base.shifted([0]))
    assert relative_error(tau_shift(stepped, [1]), both) < 1e-12
    assert tf.base.shifted([0, 1]).total() == tf.base.total() + 2


def test_shift_list_validation():
    tf = random_tau(0)
    with pytest.raises(ValueError):
        tau_shift(tf, [0, 0])
    with pytest.raises(IndexError):
        tau_shift(tf, [5])


@given(seeds, st.integers(1, 3), st.integers(1, 5), st.integers(0, 2))
def test_omega_identities(seed, i, j, m):
    tf = random_tau(seed, mults=[1, 2, 1])
    c, x = tf.spec.c, tf.base
    assert omega_a1_residual(c, x, i, j, m) <= 1e-9
    assert omega_a2_residual(c, x, i, j, m, (m + 1) % 3) <= 1e-9
    if j < tf.spec.width:
        assert casoratian_column_residual(c, x, i, j, m) <= 1e-9


def test_tau_matches_rewritten_determinant():
    chain, (sol, *_) = bethe_fixtures(5, 3)
    d = ExponentiatedData.from_chain(chain, sol)
    tf = bethe_tau()
    xs = list(tf.base.values)
    want = determinant(rewritten_omega(d, xs)) / vandermonde(xs)
    assert relative_error(-tau(tf), want) < 1e-9


@pytest.mark.parametrize("make", [random_tau, lambda s: bethe_tau(seed=s)])
def test_a1_a2(make):
    tf = make(4)
    for n in (2, 3):
        for var in range(3):
            assert identity_a1(tf, n, var).residual <= 1e-8
        assert identity_a2(tf, n).residual <= 1e-8
    with pytest.raises(ValueError):
        identity_a1(tf, 1)
    with pytest.raises(ValueError):
        identity_a2(tf, 4)


def test_a1_base_case_is_last_column_shift():
    tf = random_tau(2)
    lhs = tau_shift(tf, [0])
    rhs = tf.det([(1, ()), (2, ()), (3, (0,))])
    assert relative_error(lhs, rhs) < 1e-12


def test_a2_with_equal_values_vanishes():
    r = np.random.default_rng(0)
    spec = CasoratianSpec.random(3, 6, r)
    tf = TauFunction(spec, MiwaMultiset.of([0.8, 0.8, -1.1j]))
    chk = identity_a2(tf, 2, (0, 1))
    lhs, rhs = chk.terms
    assert lhs == 0 and abs(rhs) < 1e-12
    assert identity_a2(tf, 2, (0, 1), sep=1e-8).degenerate


@given(seeds, st.lists(st.integers(1, 2), min_size=3, max_size=3))
def test_hirota_miwa_random_coefficients(seed, mults):
    tf = random_tau(seed, mults=mults)
    assert hirota_miwa_residual(tf, (0, 1, 2)).residual <= 1e-8


def test_hirota_miwa_bethe_all_triples():
    for mults in itertools.product([1, 2], repeat=4):
        tf = bethe_tau(L=5, n=3, seed=3, mults=None)
        tf = TauFunction(tf.spec, MiwaMultiset.of(sample_points(SampleConfig(seed=8), 4), mults))
        for triple in itertools.combinations(range(4), 3):
            assert hirota_miwa_residual(tf, triple).residual <= 1e-8
    with pytest.raises(ValueError):
        hirota_miwa_residual(tf, (0, 0, 1))


def test_hirota_miwa_equal_values_cancel():
    tf = TauFunction(CasoratianSpec.random(3, 6, np.random.default_rng(1)), MiwaMultiset.of([0.6, 1.1j, 1.1j]))
    terms = hirota_miwa_terms(tf, (0, 1, 2))
    assert terms[0] == 0
    assert abs(terms[1] + terms[2]) <= 1e-12 * abs(terms[1])


@given(seeds)
def test_bilinear_and_laplace(seed):
    tf = random_tau(seed, n=4, L=3)
    for n in (3, 4):
        for chosen in itertools.combinations(range(4), n):
            assert bilinear_det_residual(tf, chosen).residual <= 1e-8
            assert laplace_identity_residual(tf, n, chosen).residual <= 1e-8


def test_bilinear_cofactors_match_hirota_terms():
    for tf in (random_tau(5), bethe_tau(seed=5)):
        cof = bilinear_cofactor_terms(bilinear_matrix(tf, (0, 1, 2)))
        hm = hirota_miwa_terms(tf, (0, 1, 2))
        lap = laplace_terms(tf, (0, 1, 2))
        for a, b, c in zip(cof, hm, lap):
            assert relative_error(a, -b) < 1e-9
            assert relative_error(c, b) < 1e-9


def test_bilinear_equal_rows_and_full_list():
    tf = TauFunction(CasoratianSpec.random(3, 6, np.random.default_rng(2)), MiwaMultiset.of([0.6, 0.6, -1.3]))
    mat = bilinear_matrix(tf, (0, 1, 2))
    assert determinant(mat) == 0
    assert bilinear_det_residual(tf, (0, 1, 2)).degenerate
    tf4 = random_tau(7, k=4)
    # the full-list reading shifts a fourth variable too and generally breaks the identity
    assert bilinear_det_residual(tf4, (0, 1, 2)).residual <= 1e-8
    assert bilinear_det_residual(tf4, (0, 1, 2), full_list=True).residual > 1e-6


def test_laplace_routes_agree():
    for tf in (random_tau(9), bethe_tau(seed=9)):
        direct = laplace_minor_terms(tf, 3)
        via = laplace_terms(tf, (0, 1, 2))
        for a, b in zip(direct, via):
            assert relative_error(a, b) < 1e-9
        assert laplace_block_matrix(tf, 3).shape == (6, 6)
        assert laplace_block_residual(tf, 3).residual <= 1e-8


def test_laplace_degenerate_flag():
    tf = TauFunction(CasoratianSpec.random(3, 6, np.random.default_rng(3)), MiwaMultiset.of([0.6, 0.6, -1.3]))
    chk = laplace_identity_residual(tf, 3)
    assert chk.degenerate and chk.residual == 0
    assert float(IdentityCheck(0.25)) == 0.25
    with pytest.raises(ValueError):
        laplace_identity_residual(tf, 2)


def test_omega_matrix_shape():
    tf = random_tau(1)
    assert omega_matrix(tf.spec.c, tf.base).shape == (3, 3)
