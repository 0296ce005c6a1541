from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmonic_chain import chain
from harmonic_chain.chain import ChainSpec
from harmonic_chain.errors import EvaluationUnstable


def test_coupling_matrix_small():
    assert np.array_equal(chain.build_coupling_matrix(ChainSpec(2)).dense(), [[1, -1], [-1, 1]])
    assert np.array_equal(chain.build_coupling_matrix(ChainSpec(3)).dense(),
                          [[1, -1, 0], [-1, 2, -1], [0, -1, 1]])


@given(st.integers(2, 60))
def test_coupling_rows_sum_to_zero(n):
    v = chain.build_coupling_matrix(ChainSpec(n)).dense()
    assert np.all(v.sum(axis=1) == 0)


def test_chain_spec_validation():
    with pytest.raises(ValueError):
        ChainSpec(1)
    with pytest.raises(ValueError):
        ChainSpec(3, mass=0.0)
    with pytest.raises(ValueError):
        ChainSpec(3, mass_term=-1.0)


def test_recursive_examples():
    assert chain.char_polys_recursive(2, 1) == (-1, -1)
    assert chain.char_polys_recursive(3, 2)[0] == 2
    assert chain.char_polys_recursive(3, 0)[0] == 0
    phi, _ = chain.char_polys_recursive(3, Fraction(1, 3))
    lam = Fraction(1, 3)
    assert phi == -lam ** 3 + 4 * lam ** 2 - 3 * lam


def test_closed_matches_recursive():
    assert chain.char_polys_closed(3, 2.0, 1e-8)[0] == pytest.approx(2.0, rel=1e-8)
    rec = chain.char_polys_recursive(10, 1.5)
    closed = chain.char_polys_closed(10, 1.5, 1e-8)
    assert closed[0] == pytest.approx(rec[0], rel=1e-8)
    assert closed[1] == pytest.approx(rec[1], rel=1e-8)


def test_closed_branch_point():
    with pytest.raises(EvaluationUnstable):
        chain.char_polys_closed(5, 0.0)
    with pytest.raises(EvaluationUnstable):
        chain.char_polys_closed(5, 4.0)


def test_secular_residual():
    assert abs(chain.secular_residual(3, 2 * math.pi / 3)) < 1e-12
    n = 100
    ansatz = (n - 2) * math.pi / (n - 1)
    assert 0 < abs(chain.secular_residual(n, ansatz)) < 10.0 / n
    # between the N=3 roots lambda=1 and lambda=3
    mid = chain.eigenvalue_angle(2.0)
    assert abs(chain.secular_residual(3, mid)) > 0.1


def test_asymptotic_examples():
    assert chain.asymptotic_eigenvalues(7)[0] == 0.0
    assert chain.asymptotic_eigenvalues(10)[9] == pytest.approx(4.0)
    assert chain.asymptotic_eigenvalues(2)[1] == pytest.approx(4.0)


def test_exact_spectrum_small():
    s2 = chain.exact_spectrum(ChainSpec(2))
    assert np.allclose(s2.eigenvalues, [0, 2], atol=1e-12)
    r = 1 / math.sqrt(2)
    assert np.allclose(s2.mode_matrix, [[r, r], [r, -r]], atol=1e-12)
    assert np.allclose(chain.exact_spectrum(ChainSpec(3)).eigenvalues, [0, 1, 3], atol=1e-12)
    s4 = chain.exact_spectrum(ChainSpec(4)).eigenvalues
    assert np.allclose(s4, [0, 2 - math.sqrt(2), 2, 2 + math.sqrt(2)], atol=1e-12)


@settings(deadline=None, max_examples=30)
@given(st.integers(2, 200))
def test_exact_spectrum_properties(n):
    spec = ChainSpec(n)
    s = chain.exact_spectrum(spec)
    o = s.mode_matrix
    assert np.allclose(o @ o.T, np.eye(n), atol=1e-10)
    assert s.eigenvalues[0] == 0.0
    assert np.all(np.diff(s.eigenvalues) >= 0)
    assert np.all(s.eigenvalues <= 4.0 + 1e-12)
    # known closed form of the free-ends spectrum
    assert np.allclose(s.eigenvalues, 4 * np.sin(np.arange(n) * np.pi / (2 * n)) ** 2, atol=1e-10)
    # sign convention
    for row in o:
        first = row[np.flatnonzero(np.abs(row) > 1e-12)[0]]
        assert first > 0
    x = np.linspace(-1, 1, n)
    assert np.allclose(s.to_sites(s.to_modes(x)), x)


@given(st.integers(2, 40))
def test_spectrum_reversal_invariant(n):
    v = chain.build_coupling_matrix(ChainSpec(n)).dense()
    rev = v[::-1, ::-1]
    assert np.allclose(np.linalg.eigvalsh(v), np.linalg.eigvalsh(rev), atol=1e-12)


def test_mode_oscillators():
    spec = ChainSpec(3, omega=2.0)
    modes = chain.mode_oscillators(spec, chain.exact_spectrum(spec))
    assert modes[0].is_free and modes[0].eff_frequency == 0.0
    assert modes[1].eff_frequency == pytest.approx(2.0)
    assert chain.mode_frequency(ChainSpec(3, omega=4.0, mass_term=3.0), 1.0) == pytest.approx(5.0)
    massive = ChainSpec(3, mass_term=3.0)
    zero = chain.mode_oscillators(massive, chain.exact_spectrum(massive))[0]
    assert not zero.is_free and zero.eff_frequency == 3.0
