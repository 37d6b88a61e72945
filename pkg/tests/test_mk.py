import itertools
import json
from collections import Counter
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mtsieve import mk
from mtsieve.mk import (
    SingularFormError,
    SymmetricBasis,
    build_forms,
    is_positive_definite,
    mk_lower_bound,
    monomial_simplex_integral,
    r_k,
    rayleigh_monte_carlo,
    simplex_moment,
)

DATA = Path(__file__).parent / "data"


# -- Dirichlet integrals -----------------------------------------------------------------

def test_monomial_integral_examples():
    assert monomial_simplex_integral(2, (0, 0)) == Fraction(1, 2)
    assert monomial_simplex_integral(2, (1, 1)) == Fraction(1, 24)
    assert monomial_simplex_integral(1, (0,), c=1) == Fraction(1, 2)
    with pytest.raises(ValueError):
        monomial_simplex_integral(2, (1,))
    with pytest.raises(ValueError):
        monomial_simplex_integral(1, (-1,))


def test_monomial_integral_monte_carlo():
    rng = np.random.default_rng(0)
    x = rng.dirichlet(np.ones(3), size=10**6)[:, :2]
    est = float(np.mean(x[:, 0] * x[:, 1])) / 2
    assert est == pytest.approx(1 / 24, rel=2e-3)


def _moment_by_expansion(k, a, c):
    """int_{R_k} (1 - P1)^a P2^c by expanding P2^c coordinate by coordinate."""
    total = Fraction(0)
    for idx in itertools.product(range(k), repeat=c):
        e = Counter(idx)
        total += monomial_simplex_integral(k, tuple(2 * e[i] for i in range(k)), a)
    return total


@given(st.integers(1, 4), st.integers(0, 4), st.integers(0, 3))
def test_moment_matches_expansion(k, a, c):
    assert simplex_moment(k, a, c) == _moment_by_expansion(k, a, c)


# -- forms -----------------------------------------------------------------------------

def test_forms_k1_constant():
    f = build_forms(SymmetricBasis(1, ((0, 0),), 0))
    assert f.M1 == ((1,),) and f.M2 == ((1,),)


def test_forms_k2_constant():
    f = build_forms(SymmetricBasis(2, ((0, 0),), 0))
    assert f.M1[0][0] == Fraction(1, 2) and f.M2[0][0] == Fraction(2, 3)
    assert mk.solve_forms(f).exact_quotient == Fraction(4, 3)


def test_forms_exactly_symmetric():
    f = build_forms(SymmetricBasis.full(5, 5))
    n = len(f.basis)
    for i in range(n):
        for j in range(n):
            assert f.M1[i][j] == f.M1[j][i] and f.M2[i][j] == f.M2[j][i]
            assert isinstance(f.M1[i][j], Fraction)


def test_forms_match_symbolic_table():
    cases = json.loads((DATA / "mk_forms_sympy.json").read_text())
    assert 0 < len(cases) <= 20
    for c in cases:
        g1, g2 = tuple(c["g1"]), tuple(c["g2"])
        gens = (g1,) if g1 == g2 else (g1, g2)
        deg = max(a + 2 * b for a, b in gens)
        f = build_forms(SymmetricBasis(c["k"], gens, deg))
        j = 0 if g1 == g2 else 1
        assert f.M1[0][j] == Fraction(c["I"]), c
        assert f.M2[0][j] == Fraction(c["J"]), c


def test_forms_independent_of_workers():
    basis = SymmetricBasis.full(6, 6)
    assert build_forms(basis, workers=1) == build_forms(basis, workers=3)


def test_basis_validation():
    with pytest.raises(ValueError):
        SymmetricBasis(3, ((0, 0), (0, 0)), 2)
    with pytest.raises(ValueError):
        SymmetricBasis(3, ((1, 1),), 2)
    assert len(SymmetricBasis.full(105, 11)) == 42


@pytest.mark.parametrize("k,deg", [(2, 7), (5, 7), (20, 7), (105, 11)])
def test_I_form_certified_positive_definite(k, deg):
    assert is_positive_definite(build_forms(SymmetricBasis.full(k, deg)).M1)


def test_dependent_generators_k1():
    # P2 = P1^2 when k = 1, so the full basis is dependent
    with pytest.raises(SingularFormError):
        mk_lower_bound(1, 2, prune_dependent=False)
    assert mk_lower_bound(1, 2).lower_bound == 1.0


# -- lower bounds ------------------------------------------------------------------------

@pytest.mark.parametrize("deg", [0, 1, 4])
def test_k1_is_exactly_one(deg):
    res = mk_lower_bound(1, deg)
    assert res.exact_quotient == 1 and res.lower_bound == 1.0


def test_k105_exceeds_four():
    res = mk_lower_bound(105, 11)
    assert res.lower_bound > 4.0
    assert res.exact_quotient > 4


def test_k5_degree7_beats_degree3_and_matches_monte_carlo():
    lo, hi = mk_lower_bound(5, 3), mk_lower_bound(5, 7)
    assert hi.lower_bound > lo.lower_bound
    mc = rayleigh_monte_carlo(5, hi.basis.generators, hi.coefficient_vector, samples=2 * 10**6, seed=1)
    assert mc == pytest.approx(hi.lower_bound, rel=0.01)


@pytest.mark.parametrize("k,deg", [(2, 3), (3, 5), (5, 7), (20, 7)])
def test_rayleigh_reverification(k, deg):
    res = mk_lower_bound(k, deg)
    assert float(res.exact_quotient) == pytest.approx(res.float_eigenvalue, rel=1e-9)
    assert Fraction(res.lower_bound) <= res.exact_quotient
    assert res.residual <= 1e-9
    f = build_forms(res.basis)
    c = [Fraction(x) for x in res.coefficient_vector]
    assert f.J(c) / f.I(c) == res.exact_quotient


@pytest.mark.parametrize("k", [2, 3, 4, 6])
def test_monotone_in_degree(k):
    vals = [mk_lower_bound(k, d).lower_bound for d in range(0, 7)]
    assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("dim", [2, 5, 19])
def test_face_sample_weights_are_unbiased(dim):
    # uniform u on the face: E[1] = 1, E[Q] = 2/(dim+1), E[Q^2] from Dirichlet moments
    Q, w = mk._face_samples(np.random.default_rng(3), 10**6, dim)
    assert float(np.mean(w)) == pytest.approx(1, abs=3e-3)
    assert float(np.mean(w * Q)) == pytest.approx(2 / (dim + 1), rel=3e-3)
    eq2 = (dim * 24 + dim * (dim - 1) * 4) / (dim * (dim + 1) * (dim + 2) * (dim + 3))
    assert float(np.mean(w * Q * Q)) == pytest.approx(eq2, rel=5e-3)


def test_monte_carlo_k20_high_degree():
    res = mk_lower_bound(20, 7)
    mc = rayleigh_monte_carlo(20, res.basis.generators, res.coefficient_vector, samples=10**6, seed=5)
    assert mc == pytest.approx(res.lower_bound, rel=0.01)


def test_monte_carlo_on_constant():
    assert rayleigh_monte_carlo(2, ((0, 0),), (1.0,), samples=10**6) == pytest.approx(4 / 3, rel=5e-3)


# -- r_k ---------------------------------------------------------------------------------

def test_r_k_examples():
    assert r_k(0.5, 4.0000001) == 2
    assert r_k(0.9, 2) == 1
    assert r_k(Fraction(1, 2), 4) == 1
    with pytest.raises(ValueError):
        r_k(0, 4)
    with pytest.raises(ValueError):
        r_k(0.5, 0)
