"""Gaps between monic irreducibles of equal degree over F_q.

A *gap* of degree d in degree n is a polynomial g of degree d with
g = f1 - f2 for monic irreducibles f1, f2 of degree n.  Both are monic of the
same degree, so f1 - f2 has degree d exactly when their coefficients agree
above t^d and differ at t^d.  Censuses group the irreducibles by those high
coefficients and count ordered pairs inside each group.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._util import check_budget
from .ffpoly import Poly, PrimeField, _index_weights, irreducible_mask, is_irreducible, monic_digits
from .rings import RingDescriptor
from .tuples import Tuple, is_admissible


@dataclass(frozen=True)
class GapCensus:
    q: int
    n: int
    d: int
    occurrences: dict
    total: int
    monomials_only: bool = False

    @property
    def occurring(self):
        return len(self.occurrences)

    @property
    def proportion(self):
        return Fraction(self.occurring, self.total)

    def count(self, g):
        return self.occurrences.get(g, 0)

    def rows(self):
        """(gap text, count) in lexicographic order of the gap coefficients."""
        return [(g.to_text(), c) for g, c in sorted(self.occurrences.items(), key=lambda kv: _code_key(kv[0]))]


def _code_key(g):
    return tuple(reversed(g.coeffs))


def _encode(digits, q):
    return digits @ (q ** np.arange(digits.shape[1], dtype=np.int64)) if digits.shape[1] else np.zeros(len(digits), dtype=np.int64)


def _group_counts(low, q, d):
    diff = (low[:, None, :] - low[None, :, :]) % q
    ok = diff[..., d] != 0
    codes = _encode(diff[ok], q)
    return np.bincount(codes, minlength=q ** (d + 1))


def gap_census(q, n, d, workers=1, budget=None, monomials_only=False):
    """Ordered-pair counts of every degree-d difference of monic irreducibles of degree n."""
    PrimeField(q)
    if not 0 <= d < n:
        raise ValueError("need 0 <= d < n")
    check_budget(q**n, budget, f"monic polynomials of degree {n} over F_{q}")
    irr = monic_digits(q, n, only_irreducible=True, budget=budget)
    high = _encode(irr[:, d + 1 :], q)
    order = np.argsort(high, kind="stable")
    irr, high = irr[order], high[order]
    cuts = np.flatnonzero(np.diff(high)) + 1
    groups = [g[:, : d + 1] for g in np.split(irr, cuts) if len(g) > 1]

    def work(gs):
        acc = np.zeros(q ** (d + 1), dtype=np.int64)
        for g in gs:
            acc += _group_counts(g, q, d)
        return acc

    nshard = max(1, min(workers, len(groups)))
    shards = [groups[i::nshard] for i in range(nshard)]
    if nshard > 1:
        with ThreadPoolExecutor(nshard) as ex:
            parts = list(ex.map(work, shards))
    else:
        parts = [work(s) for s in shards]
    counts = sum(parts) if parts else np.zeros(q ** (d + 1), dtype=np.int64)
    field_ = PrimeField(q)
    occ = {}
    for code in np.flatnonzero(counts):
        coeffs = [(int(code) // q**i) % q for i in range(d + 1)]
        if monomials_only and any(coeffs[:d]):
            continue
        occ[Poly(field_, tuple(coeffs))] = int(counts[code])
    total = q - 1 if monomials_only else (q - 1) * q**d
    return GapCensus(q, n, d, occ, total, monomials_only)


# -- monomial gaps and the omega twist -----------------------------------------------------------

def twist_gap(f1, f2, a):
    """Rescale a monomial gap c*t^d to a*t^d via f(t) -> f(w t)/w^n with w^(n-d) = c/a."""
    q = f1.q
    if f2.q != q:
        raise ValueError("polynomials over different fields")
    n = f1.degree
    for f in (f1, f2):
        if f.degree != n or not f.is_monic() or not is_irreducible(f):
            raise ValueError("f1 and f2 must be monic irreducible of the same degree")
    a %= q
    if a == 0:
        raise ValueError("target coefficient must be nonzero")
    diff = f1 - f2
    nz = [i for i, c in enumerate(diff.coeffs) if c]
    if len(nz) != 1:
        raise ValueError("f1 - f2 is not a nonzero monomial")
    d = nz[0]
    c = diff.coeffs[d]
    if math.gcd(n - d, q - 1) != 1:
        raise ValueError(f"gcd(n - d, q - 1) = gcd({n - d}, {q - 1}) != 1, so w need not exist")
    target = c * pow(a, q - 2, q) % q
    e = pow(n - d, -1, q - 1) if q > 2 else 1
    w = pow(target, e, q)
    assert pow(w, n - d, q) == target
    return _twist(f1, w), _twist(f2, w)


def _twist(f, w):
    q, n = f.q, f.degree
    winv = pow(w, q - 2, q)
    return Poly(f.field, tuple(c * pow(winv, n - j, q) for j, c in enumerate(f.coeffs)))


@dataclass(frozen=True)
class MonomialCensus:
    census: GapCensus
    gcd_condition: bool
    all_monomials: bool
    realized: tuple

    @property
    def orbit_subgroup(self):
        return twist_subgroup(self.census.q, self.census.n, self.census.d)

    def orbit_closed(self):
        """Realized coefficients form a union of cosets of {w^(n-d)}."""
        q = self.census.q
        real = set(self.realized)
        return all(a * u % q in real for a in real for u in self.orbit_subgroup)


def twist_subgroup(q, n, d):
    return sorted({pow(w, n - d, q) for w in range(1, q)})


def monomial_census(q, n, d, workers=1, budget=None):
    census = gap_census(q, n, d, workers, budget, monomials_only=True)
    realized = tuple(sorted(g.coeffs[d] for g in census.occurrences))
    return MonomialCensus(census, math.gcd(n - d, q - 1) == 1, len(realized) == q - 1, realized)


# -- Z(k, d, n) ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class ZAssertionResult:
    q: int
    k: int
    d: int
    n: int
    holds: object
    counterexample: tuple = None
    tuples_examined: int = 0
    status: str = field(default="complete")

    def to_json(self):
        return {
            "q": self.q,
            "k": self.k,
            "d": self.d,
            "n": self.n,
            "holds": self.holds,
            "status": self.status,
            "tuples_examined": self.tuples_examined,
            "counterexample": None if self.counterexample is None else [h.to_json() for h in self.counterexample],
        }


def _degree_d_polys(q, d):
    """All polynomials of degree exactly d, ordered by (leading coefficient, lower coefficients)."""
    out = []
    for lead in range(1, q):
        for low in itertools.product(range(q), repeat=d):
            out.append(tuple(reversed(low)) + (lead,))
    return out


def _sub(a, b, q):
    n = max(len(a), len(b))
    a = a + (0,) * (n - len(a))
    b = b + (0,) * (n - len(b))
    return tuple((x - y) % q for x, y in zip(a, b))


def _patterns(q, k, d):
    """Translation classes of admissible-shape tuples as sorted difference patterns (0, e_2, ...)."""
    cands = _degree_d_polys(q, d)
    seen = set()
    for combo in itertools.combinations(cands, k - 1):
        ok = all(x[d] != y[d] for x, y in itertools.combinations(combo, 2))
        if not ok:
            continue
        pts = [(0,) * (d + 1)] + list(combo)
        canon = min(tuple(sorted(_sub(p, base, q) for p in pts)) for base in pts)
        if canon in seen:
            continue
        seen.add(canon)
        # a base h1 = l*t^d keeps every element of degree d iff l avoids 0 and -lead(e_i)
        leads = {e[d] for e in canon if any(e)}
        free = [l for l in range(1, q) if all((l + x) % q for x in leads)]
        if not free:
            continue
        yield canon, free[0]


def check_Z(q, k, d, n, budget=None, workers=1):
    """Exhaustive check of Z(k, d, n): every admissible k-tuple whose elements and pairwise
    differences all have degree d has a monic f of degree n with two irreducible translates.

    Tuples are taken up to translation.  When the scan would exceed ``budget``
    the result is inconclusive (``holds`` is None), never false.
    """
    PrimeField(q)
    if k < 2:
        raise ValueError("k must be at least 2")
    if not 0 <= d < n:
        raise ValueError("need 0 <= d < n")
    ring = RingDescriptor.poly(q)
    cap = budget if budget is not None else 10**8
    check_budget(q**n, budget, f"monic polynomials of degree {n} over F_{q}")
    mask = irreducible_mask(q, n)
    digits = monic_digits(q, n)
    weights = _index_weights(q, n)
    fieldq = PrimeField(q)
    examined = 0
    spent = 0
    for canon, lead in _patterns(q, k, d):
        h1 = (0,) * d + (lead,)
        elems = tuple(Poly(fieldq, tuple((a + b) % q for a, b in zip(h1, e))) for e in canon)
        if not is_admissible(Tuple(ring, elems)).admissible:
            continue
        spent += k * q**n
        if spent > cap:
            return ZAssertionResult(q, k, d, n, None, None, examined, "inconclusive: budget exhausted")
        examined += 1
        hits = np.zeros(len(digits), dtype=np.int64)
        for h in elems:
            hc = np.zeros(n, dtype=np.int64)
            hc[: len(h.coeffs)] = h.coeffs
            hits += mask[((digits + hc[None, :]) % q) @ weights]
        if not np.any(hits >= 2):
            return ZAssertionResult(q, k, d, n, False, elems, examined)
    return ZAssertionResult(q, k, d, n, True, None, examined)


def proportion_bound(k0, q):
    """1/(k0 - 1) - 1/(q - 1), defined for k0 >= 2 and q >= k0 + 1."""
    if k0 < 2:
        raise ValueError("k0 must be at least 2")
    if q < k0 + 1:
        raise ValueError(f"need q >= k0 + 1, got q={q}, k0={k0}")
    return Fraction(1, k0 - 1) - Fraction(1, q - 1)
