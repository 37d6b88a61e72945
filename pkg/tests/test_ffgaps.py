import itertools
import json
import math
from collections import Counter
from fractions import Fraction
from pathlib import Path

import pytest

from mtsieve.ffgaps import (
    check_Z,
    gap_census,
    monomial_census,
    proportion_bound,
    twist_gap,
    twist_subgroup,
)
from mtsieve.ffpoly import Poly, enumerate_monic, is_irreducible
from mtsieve.rings import RingDescriptor
from mtsieve.tuples import Tuple, is_admissible

DATA = Path(__file__).parent / "data"
SMALL = [(2, 1, 0), (2, 4, 1), (2, 5, 2), (3, 2, 0), (3, 2, 1), (3, 3, 0), (3, 4, 2), (5, 2, 0), (5, 3, 1), (7, 2, 1)]


def P(q, *c):
    return Poly.from_coeffs(q, c)


def naive_census(q, n, d):
    irr = list(enumerate_monic(q, n, only_irreducible=True))
    out = Counter()
    for f1, f2 in itertools.product(irr, repeat=2):
        g = f1 - f2
        if g.degree == d:
            out[g] += 1
    return out


# -- census -------------------------------------------------------------------------

def test_census_examples():
    c = gap_census(3, 2, 1)
    assert c.occurring == c.total == 6 and c.proportion == 1
    assert gap_census(3, 2, 0).occurring == 0
    c = gap_census(2, 1, 0)
    assert c.rows() == [("1", 2)]


@pytest.mark.parametrize("q,n,d", SMALL)
def test_census_matches_pairwise_oracle(q, n, d):
    assert gap_census(q, n, d).occurrences == dict(naive_census(q, n, d))


@pytest.mark.parametrize("q,n,d", SMALL + [(3, 6, 3), (5, 4, 2)])
def test_census_invariants(q, n, d):
    c = gap_census(q, n, d)
    for g, cnt in c.occurrences.items():
        assert g.degree == d and cnt > 0
        assert c.count(-g) == cnt
    assert c.total == (q - 1) * q**d


def test_census_independent_of_threads():
    assert gap_census(3, 7, 3, workers=1) == gap_census(3, 7, 3, workers=4)


def test_census_preconditions():
    with pytest.raises(ValueError):
        gap_census(3, 2, 2)
    with pytest.raises(ValueError):
        gap_census(4, 2, 1)


# -- twist ---------------------------------------------------------------------------

def test_twist_example():
    f1, f2 = P(3, 1, 2, 0, 1), P(3, 2, 2, 0, 1)
    assert is_irreducible(f1) and is_irreducible(f2)
    g1, g2 = twist_gap(f1, f2, 1)
    assert g1 - g2 == P(3, 1)
    assert is_irreducible(g1) and is_irreducible(g2) and g1.is_monic() and g2.is_monic()


def test_twist_identity_when_a_equals_c():
    f1, f2 = P(3, 1, 2, 0, 1), P(3, 2, 2, 0, 1)
    assert twist_gap(f1, f2, 2) == (f1, f2)


def test_twist_preconditions():
    irr = list(enumerate_monic(5, 2, only_irreducible=True))
    pair = next((a, b) for a, b in itertools.permutations(irr, 2) if (a - b).degree == 0)
    with pytest.raises(ValueError, match="gcd"):
        twist_gap(*pair, 1)
    f1, f2 = P(3, 1, 2, 0, 1), P(3, 2, 2, 0, 1)
    with pytest.raises(ValueError):
        twist_gap(f1, f2, 0)
    with pytest.raises(ValueError):
        twist_gap(f1, P(3, 2, 1, 0, 1), 1)
    with pytest.raises(ValueError):
        twist_gap(f1, P(3, 0, 2, 0, 1), 1)


@pytest.mark.parametrize("q,n,d", [(3, 3, 0), (3, 4, 1), (5, 3, 0), (5, 4, 1), (7, 3, 2), (3, 5, 0)])
def test_every_valid_twist_is_correct(q, n, d):
    assert math.gcd(n - d, q - 1) == 1
    irr = list(enumerate_monic(q, n, only_irreducible=True))
    pairs = [(a, b) for a, b in itertools.permutations(irr, 2)
             if sum(1 for c in (a - b).coeffs if c) == 1 and (a - b).degree == d]
    assert pairs
    for f1, f2 in pairs[:40]:
        for a in range(1, q):
            g1, g2 = twist_gap(f1, f2, a)
            assert g1 - g2 == Poly.monomial(q, a, d)
            for g in (g1, g2):
                assert g.degree == n and g.is_monic() and is_irreducible(g)


# -- monomial census ------------------------------------------------------------------

def test_monomial_census_examples():
    m = monomial_census(3, 3, 0)
    assert m.realized == (1, 2) and m.gcd_condition and m.all_monomials
    assert monomial_census(3, 2, 0).realized == ()
    for n in range(1, 8):
        for d in range(n):
            assert len(monomial_census(2, n, d).realized) <= 1


@pytest.mark.parametrize("q,n,d", [(q, n, d) for q in (3, 5, 7) for n in range(1, 6) for d in range(n) if q**n <= 20000])
def test_orbit_consistency(q, n, d):
    m = monomial_census(q, n, d)
    assert m.orbit_closed()
    if m.gcd_condition:
        assert twist_subgroup(q, n, d) == list(range(1, q))
        assert m.realized in ((), tuple(range(1, q)))


def test_no_monomial_gaps_over_F2():
    # an irreducible f of degree >= 2 has f(0) = f(1) = 1, so t divides f + 1 and t + 1 divides f + t^d
    for n in range(2, 11):
        for d in range(n):
            assert monomial_census(2, n, d).realized == ()


def test_q107_monomial_census():
    m = monomial_census(107, 2, 0)
    assert m.realized and m.orbit_closed()


# -- Z(k, d, n) ------------------------------------------------------------------------

def naive_Z(q, k, d, n):
    """All admissible k-sets of degree-d polynomials with degree-d differences, checked directly."""
    ring = RingDescriptor.poly(q)
    cands = [P(q, *low, lead) for lead in range(1, q) for low in itertools.product(range(q), repeat=d)]
    fs = list(enumerate_monic(q, n))
    irr = {f for f in fs if is_irreducible(f)}
    for hs in itertools.combinations(cands, k):
        if any((a - b).degree != d for a, b in itertools.combinations(hs, 2)):
            continue
        if not is_admissible(Tuple(ring, hs)).admissible:
            continue
        if not any(sum((f + h) in irr for h in hs) >= 2 for f in fs):
            return False
    return True


def test_Z_examples():
    r = check_Z(3, 2, 0, 2)
    assert r.holds is False and r.counterexample is not None
    assert check_Z(3, 2, 1, 2).holds is True
    r = check_Z(3, 4, 0, 3)
    assert r.holds is True and r.tuples_examined == 0


@pytest.mark.parametrize("q,k,d,n", [(3, 2, 0, 2), (3, 2, 0, 3), (3, 2, 1, 2), (3, 2, 1, 3), (3, 3, 1, 2),
                                     (5, 2, 0, 2), (5, 3, 0, 2), (5, 2, 1, 2), (2, 2, 1, 3), (2, 3, 2, 3)])
def test_Z_matches_naive_scan(q, k, d, n):
    assert check_Z(q, k, d, n).holds == naive_Z(q, k, d, n)


def test_counterexample_satisfies_constraints():
    for q, k, d, n in [(3, 2, 0, 2), (3, 2, 0, 4), (5, 2, 0, 2)]:
        r = check_Z(q, k, d, n)
        assert r.holds is False
        hs = r.counterexample
        assert len(hs) == k and all(h.degree == d for h in hs)
        assert all((a - b).degree == d for a, b in itertools.combinations(hs, 2))
        assert is_admissible(Tuple(RingDescriptor.poly(q), hs)).admissible


@pytest.mark.parametrize("q", [3, 5, 7])
def test_Z2_equals_full_gap_census(q):
    # a degree-constrained pair is a translate of (0, e) with e of degree d; Z(2, d, n) says every e is a gap
    for d in (0, 1):
        for n in range(d + 1, 5):
            if q**n > 3000:
                break
            c = gap_census(q, n, d)
            assert check_Z(q, 2, d, n).holds == (c.occurring == c.total)


def test_Z_monotone_in_k():
    grid = json.loads((DATA / "z_grid.json").read_text())
    by = {(g["q"], g["k"], g["d"], g["n"]): g["holds"] for g in grid}
    pairs = 0
    for (q, k, d, n), holds in by.items():
        prev = by.get((q, k - 1, d, n))
        if prev:
            pairs += 1
            assert holds
    assert pairs > 10


def test_Z_grid_regression():
    for g in json.loads((DATA / "z_grid.json").read_text()):
        assert check_Z(g["q"], g["k"], g["d"], g["n"]).holds == g["holds"], g


def test_Z_inconclusive_on_budget():
    r = check_Z(5, 3, 2, 4, budget=10**5)
    assert r.holds is None and r.status.startswith("inconclusive")
    assert r.to_json()["holds"] is None


def test_Z_preconditions():
    with pytest.raises(ValueError):
        check_Z(3, 1, 0, 2)
    with pytest.raises(ValueError):
        check_Z(3, 2, 2, 2)


# -- proportion bound --------------------------------------------------------------------

def test_bound_examples():
    assert proportion_bound(105, 107) == Fraction(1, 5512)
    assert proportion_bound(2, 4) == Fraction(2, 3)
    with pytest.raises(ValueError):
        proportion_bound(5, 5)
    with pytest.raises(ValueError):
        proportion_bound(1, 5)
