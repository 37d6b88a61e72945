"""Admissible k-tuples over Z, F_q[t] and real quadratic rings."""

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import quadratic as qf
from .ffpoly import Poly, _rem
from .rings import RingDescriptor, primes_of_norm_at_most, prime_norm


class SearchBudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class Tuple:
    ring: RingDescriptor
    elements: tuple

    def __post_init__(self):
        els = tuple(self.ring.element(e) for e in self.elements)
        if not els:
            raise ValueError("a tuple needs at least one element")
        if len(set(els)) != len(els):
            raise ValueError("tuple elements must be distinct")
        object.__setattr__(self, "elements", els)

    @property
    def k(self):
        return len(self.elements)

    def translate(self, c):
        c = self.ring.element(c)
        return Tuple(self.ring, tuple(h + c for h in self.elements))

    def to_json(self):
        return [self.ring.element_to_json(h) for h in self.elements]


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    witness: object = None
    covered: list = None
    primes_checked: list = field(default_factory=list)

    def to_json(self, ring):
        out = {"admissible": self.admissible}
        if not self.admissible:
            out["witness"] = _prime_json(ring, self.witness)
            out["covered"] = [_residue_json(r) for r in self.covered]
        out["primes_checked"] = len(self.primes_checked)
        return out


def _prime_json(ring, p):
    if ring.is_integers:
        return p
    if ring.is_poly:
        return p.to_json()
    return [p.p, p.kind, p.root]


def _residue_json(r):
    if isinstance(r, tuple):
        return list(r)
    return r


def _residue(ring, p, a):
    if ring.is_integers:
        return a % p
    if ring.is_poly:
        return _rem(a.coeffs, p.coeffs, ring.q)
    return p.residue(a)


def is_admissible(t):
    """Check every prime of norm <= k; larger residue rings cannot be covered by k elements."""
    ring = t.ring
    checked = primes_of_norm_at_most(ring, t.k)
    for p in checked:
        size = prime_norm(ring, p)
        seen = {_residue(ring, p, h) for h in t.elements}
        if len(seen) == size:
            return AdmissibilityReport(False, p, sorted(seen), checked)
    return AdmissibilityReport(True, None, None, checked)


def lift_admissible_check(t, target):
    """Re-check an admissible integer tuple inside a real quadratic ring."""
    if not t.ring.is_integers:
        raise ValueError("lift_admissible_check expects a tuple over Z")
    if not target.is_quadratic:
        raise ValueError("target must be a real quadratic ring")
    if not is_admissible(t).admissible:
        raise ValueError("input tuple is not admissible over Z")
    lifted = Tuple(target, tuple(qf.QuadInt(target.d, h, 0) for h in t.elements))
    return is_admissible(lifted)


def diameter(t):
    if not t.ring.is_integers:
        raise ValueError("diameter is defined for tuples over Z")
    return max(t.elements) - min(t.elements)


# -- narrow tuple search ------------------------------------------------------------

def _sieve_interval(lo, hi, primes):
    """Greedy residue sieve on [lo, hi]: for each prime remove the class killing fewest survivors."""
    alive = list(range(lo, hi + 1))
    for p in primes:
        counts = [0] * p
        for x in alive:
            counts[x % p] += 1
        best = min(range(p), key=lambda r: (counts[r], r))
        alive = [x for x in alive if x % p != best]
    return alive


def _best_window(survivors, k):
    best = None
    for i in range(len(survivors) - k + 1):
        w = survivors[i : i + k]
        key = (w[-1] - w[0], [x - w[0] for x in w])
        if best is None or key < best:
            best = key
    return best


def _shrink(elements, primes):
    """Local shrinking: try replacing an endpoint by an interior admissible point."""
    cur = sorted(elements)
    improved = True
    while improved:
        improved = False
        k = len(cur)
        for drop in (k - 1, 0):
            rest = cur[:drop] + cur[drop + 1 :]
            lo, hi = rest[0], rest[-1]
            for x in range(lo + 1, hi):
                if x in rest:
                    continue
                cand = sorted(rest + [x])
                if all(len({h % p for h in cand}) < p for p in primes):
                    if cand[-1] - cand[0] < cur[-1] - cur[0]:
                        cur = cand
                        improved = True
                        break
            if improved:
                break
    return [x - cur[0] for x in cur]


def _int_shard(args):
    k, H, offsets, primes = args
    best = None
    for a in offsets:
        surv = _sieve_interval(a, a + H, primes)
        if len(surv) >= k:
            w = _best_window(surv, k)
            if best is None or w < best:
                best = w
    return best


def find_narrow_tuple(ring, k, search_budget=2000, max_degree=None, workers=1):
    """Admissible k-tuple of small diameter (Z) or small maximum degree (F_q[t]).

    Over Z the greedy sieve is run on intervals [a, a + H] for increasing H and
    shifts a, spending at most ``search_budget`` sieve runs; the best window is
    then locally shrunk.  Ties go to the lexicographically smallest tuple, so the
    result depends only on (ring, k, budget).
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if ring.is_integers:
        return _find_int(k, search_budget, workers)
    if ring.is_poly:
        return _find_poly(ring, k, search_budget, max_degree)
    raise ValueError("narrow tuple search supports Z and F_q[t]")


def _find_int(k, budget, workers):
    primes = primes_of_norm_at_most(RingDescriptor.integers(), k)
    runs = 0
    # phase 1: smallest interval length H (coarse steps) where the shift-0 sieve succeeds
    H = k - 1
    best = None
    while runs < budget:
        runs += 1
        best = _int_shard((k, H, [0], primes))
        if best is not None:
            break
        H += max(1, H // 64)
    if best is None:
        raise SearchBudgetExhausted(f"no admissible {k}-tuple found within {budget} sieve runs")
    # phase 2: spend the remaining budget on shifted intervals of the same length
    offsets = list(range(1, 1 + max(0, budget - runs)))
    if offsets:
        nshard = max(1, min(workers, len(offsets)))
        shards = [(k, H, offsets[i::nshard], primes) for i in range(nshard)]
        if nshard > 1:
            with ThreadPoolExecutor(nshard) as ex:
                results = list(ex.map(_int_shard, shards))
        else:
            results = [_int_shard(s) for s in shards]
        for w in results:
            if w is not None and w < best:
                best = w
    shrunk = _shrink(best[1], primes)
    return Tuple(RingDescriptor.integers(), tuple(shrunk))


def _find_poly(ring, k, budget, max_degree):
    q = ring.q
    primes = primes_of_norm_at_most(ring, k)
    cap = max_degree if max_degree is not None else 64
    runs = 0
    for D in range(0, cap + 1):
        if runs >= budget:
            break
        runs += 1
        count = q ** (D + 1)
        if count > 10**6:
            break
        alive = [Poly.from_coeffs(q, c) for c in itertools.product(range(q), repeat=D + 1)]
        alive.sort(key=lambda f: (f.degree, f.coeffs))
        for P in primes:
            groups = {}
            for f in alive:
                groups.setdefault(_rem(f.coeffs, P.coeffs, q), []).append(f)
            classes = sorted(
                (tuple(c) for c in itertools.product(range(q), repeat=P.degree)),
            )
            best = min(classes, key=lambda c: (len(groups.get(_trim_tuple(c), [])), c))
            dead = _trim_tuple(best)
            alive = [f for f in alive if _rem(f.coeffs, P.coeffs, q) != dead]
        if len(alive) >= k:
            return Tuple(ring, tuple(alive[:k]))
    raise SearchBudgetExhausted(f"no admissible {k}-tuple of degree <= {cap} over F_{q}[t] within budget")


def _trim_tuple(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


# -- parsing ------------------------------------------------------------------------

def parse_tuple(ring, text):
    """Inline "0,2,6" (Z), "1,0,1;2,1" (F_q[t], ';' between polynomials),
    "x,y;x,y" (quadratic coordinates), or "@file.json"."""
    text = text.strip()
    if text.startswith("@"):
        with open(text[1:]) as fh:
            data = json.load(fh)
        return Tuple(ring, tuple(ring.element(v) for v in data))
    if ring.is_integers:
        return Tuple(ring, tuple(int(tok) for tok in text.replace(";", ",").split(",") if tok.strip()))
    parts = [p for p in text.split(";") if p.strip()]
    if ring.is_poly:
        return Tuple(ring, tuple(Poly.parse(ring.q, p) for p in parts))
    return Tuple(ring, tuple(ring.element(tuple(int(v) for v in p.split(","))) for p in parts))

