"""Real quadratic rings of integers with class number one.

Only Q(sqrt d) for d in {2, 3, 5, 13} is supported.  An element is stored by
its coordinates (x, y) over the integral basis (1, omega), where omega is
sqrt(d) for d = 2, 3 and (1 + sqrt d)/2 for d = 5, 13.  Embedding comparisons
are done with integer arithmetic on the "half-coordinates" (A, B) defined by
alpha = (A + B sqrt d)/2, never with floating square roots.
"""

import math
from dataclasses import dataclass

from ._util import check_budget, is_prime_int, legendre, prime_sieve

WHITELIST = (2, 3, 5, 13)


def _check_d(d):
    if d not in WHITELIST:
        raise ValueError(f"d={d} not in the supported fields {WHITELIST}")


def half_basis(d):
    """True when the integral basis uses (1 + sqrt d)/2."""
    return d % 4 == 1


def sign_surd(u, v, d):
    """Sign of u + v*sqrt(d) for integers u, v and nonsquare d > 0."""
    if u >= 0 and v >= 0:
        return 0 if (u == 0 and v == 0) else 1
    if u <= 0 and v <= 0:
        return -1
    # opposite signs: compare u^2 with d v^2
    lhs, rhs = u * u, d * v * v
    if u > 0:
        return 1 if lhs > rhs else -1
    return 1 if rhs > lhs else -1


@dataclass(frozen=True)
class QuadInt:
    d: int
    x: int
    y: int

    def __post_init__(self):
        _check_d(self.d)

    @classmethod
    def from_half(cls, d, A, B):
        """Element (A + B sqrt d)/2; raises if it is not integral."""
        if half_basis(d):
            if (A - B) % 2:
                raise ValueError("not an algebraic integer")
            return cls(d, (A - B) // 2, B)
        if A % 2 or B % 2:
            raise ValueError("not an algebraic integer")
        return cls(d, A // 2, B // 2)

    @property
    def half(self):
        """(A, B) with self = (A + B sqrt d)/2."""
        if half_basis(self.d):
            return 2 * self.x + self.y, self.y
        return 2 * self.x, 2 * self.y

    @property
    def norm(self):
        A, B = self.half
        return (A * A - self.d * B * B) // 4

    @property
    def trace(self):
        return self.half[0]

    def embeddings(self):
        """Floating approximations of both real embeddings (display only)."""
        A, B = self.half
        r = math.sqrt(self.d)
        return (A + B * r) / 2, (A - B * r) / 2

    def conjugate(self):
        A, B = self.half
        return QuadInt.from_half(self.d, A, -B)

    def _same(self, other):
        if isinstance(other, int):
            return QuadInt(self.d, other, 0)
        if other.d != self.d:
            raise ValueError("elements of different fields")
        return other

    def __add__(self, other):
        o = self._same(other)
        return QuadInt(self.d, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._same(other)
        return QuadInt(self.d, self.x - o.x, self.y - o.y)

    def __neg__(self):
        return QuadInt(self.d, -self.x, -self.y)

    def __mul__(self, other):
        o = self._same(other)
        if half_basis(self.d):
            m = (self.d - 1) // 4
            return QuadInt(
                self.d,
                self.x * o.x + m * self.y * o.y,
                self.x * o.y + o.x * self.y + self.y * o.y,
            )
        return QuadInt(self.d, self.x * o.x + self.d * self.y * o.y, self.x * o.y + o.x * self.y)

    __rmul__ = __mul__

    def divides_rational(self, p):
        """True when the rational integer p divides self in the ring."""
        return self.x % p == 0 and self.y % p == 0

    def is_unit(self):
        return abs(self.norm) == 1

    def __str__(self):
        A, B = self.half
        if B == 0:
            return str(A // 2)
        sgn = "+" if B > 0 else "-"
        b = abs(B)
        surd = f"sqrt{self.d}" if b == 1 else f"{b}*sqrt{self.d}"
        if A % 2 == 0 and B % 2 == 0:
            b2 = b // 2
            surd = f"sqrt{self.d}" if b2 == 1 else f"{b2}*sqrt{self.d}"
            return f"{A // 2} {sgn} {surd}" if A else (f"-{surd}" if B < 0 else surd)
        return f"({A} {sgn} {surd})/2"


# Fundamental units, verified below at import.
FUNDAMENTAL_UNITS = {
    2: QuadInt(2, 1, 1),  # 1 + sqrt2
    3: QuadInt(3, 2, 1),  # 2 + sqrt3
    5: QuadInt(5, 0, 1),  # (1 + sqrt5)/2
    13: QuadInt(13, 1, 1),  # (3 + sqrt13)/2
}
for _d, _u in FUNDAMENTAL_UNITS.items():
    assert abs(_u.norm) == 1, f"bad unit for d={_d}"


def unit_group_sample(d, powers=2):
    """Units +-eps^j for |j| <= powers."""
    eps = FUNDAMENTAL_UNITS[d]
    inv = eps.conjugate() if eps.norm == 1 else -eps.conjugate()
    out = []
    for s in (1, -1):
        u = QuadInt(d, s, 0)
        out.append(u)
        a = b = u
        for _ in range(powers):
            a = a * eps
            b = b * inv
            out.extend([a, b])
    return out


# -- prime ideals ---------------------------------------------------------------

@dataclass(frozen=True)
class PrimeIdeal:
    """Prime ideal above the rational prime p: kind in {split, inert, ramified}.

    For split and ramified ideals ``root`` is the image of omega in Z/p, so the
    residue map is x + y*omega -> x + y*root (mod p).  Inert ideals have
    residue field F_{p^2} and the residue of x + y*omega is the pair (x, y) mod p.
    """

    d: int
    p: int
    kind: str
    root: int = -1

    @property
    def norm(self):
        return self.p * self.p if self.kind == "inert" else self.p

    def residue(self, a):
        if self.kind == "inert":
            return (a.x % self.p, a.y % self.p)
        return (a.x + a.y * self.root) % self.p

    def residue_field_size(self):
        return self.norm

    def __str__(self):
        if self.kind == "inert":
            return f"({self.p})"
        return f"({self.p}, omega-{self.root})"


def splitting_type(d, p):
    _check_d(d)
    if p == 2:
        if half_basis(d):
            return "inert" if d % 8 == 5 else "split"
        return "ramified"
    if d % p == 0:
        return "ramified"
    return "split" if legendre(d, p) == 1 else "inert"


def _omega_roots(d, p):
    """Roots of the minimal polynomial of omega modulo p."""
    if half_basis(d):
        m = (d - 1) // 4
        return sorted({r for r in range(p) if (r * r - r - m) % p == 0})
    return sorted({r for r in range(p) if (r * r - d) % p == 0})


def prime_ideals_above(d, p):
    kind = splitting_type(d, p)
    if kind == "inert":
        return [PrimeIdeal(d, p, "inert")]
    roots = _omega_roots(d, p)
    if kind == "ramified":
        return [PrimeIdeal(d, p, "ramified", roots[0])]
    return [PrimeIdeal(d, p, "split", r) for r in roots]


def prime_ideals_up_to(d, bound):
    """All prime ideals of norm <= bound, ordered by (norm, p, root)."""
    out = []
    p = 2
    while p <= bound:
        if is_prime_int(p):
            out.extend(P for P in prime_ideals_above(d, p) if P.norm <= bound)
        p += 1
    return sorted(out, key=lambda P: (P.norm, P.p, P.root))


# -- primes and boxes --------------------------------------------------------------

def is_prime_element(a, prime_test=is_prime_int):
    """True iff a generates a prime ideal (class number one, so every prime ideal is principal)."""
    n = abs(a.norm)
    if n == 0 or n == 1:
        raise ValueError("zero and units are neither prime nor composite")
    if prime_test(n):
        return True
    r = math.isqrt(n)
    if r * r == n and prime_test(r):
        return splitting_type(a.d, r) == "inert" and a.divides_rational(r)
    return False


def _in_a0(d, A, B, N):
    # 0 < (A +- B sqrt d)/2 <= N
    return (
        sign_surd(A, B, d) > 0
        and sign_surd(A, -B, d) > 0
        and sign_surd(2 * N - A, -B, d) >= 0
        and sign_surd(2 * N - A, B, d) >= 0
    )


def _half_coords_a0(d, N):
    """Yield (A, B) for A_0(N) in increasing (A, B) order."""
    bmax = math.isqrt(4 * N * N // d + 1) + 1
    for A in range(1, 2 * N + 1):
        # both embeddings positive forces |B| sqrt d < A
        bm = min(bmax, math.isqrt(A * A // d) + 1)
        for B in range(-bm, bm + 1):
            if half_basis(d):
                if (A - B) % 2:
                    continue
            elif A % 2 or B % 2:
                continue
            if _in_a0(d, A, B, N):
                yield A, B


def enumerate_a0(d, N, budget=None):
    """Elements of A_0(N): 0 < sigma(alpha) <= N at both real embeddings."""
    _check_d(d)
    check_budget(int(2 * N * N / math.sqrt(d)) + 1, budget, f"A_0({N}) in Q(sqrt {d})")
    for A, B in _half_coords_a0(d, N):
        yield QuadInt.from_half(d, A, B)


def enumerate_quadratic_box(d, N, budget=None):
    """A(N) = A_0(2N) minus A_0(N)."""
    for a in enumerate_a0(d, 2 * N, budget):
        A, B = a.half
        if not _in_a0(d, A, B, N):
            yield a


def embedding_gap_ok(a, b, bound):
    """|sigma(a - b)| <= bound at both embeddings, exactly."""
    A, B = (a - b).half
    return (
        sign_surd(2 * bound - A, -B, a.d) >= 0
        and sign_surd(2 * bound - A, B, a.d) >= 0
        and sign_surd(2 * bound + A, B, a.d) >= 0
        and sign_surd(2 * bound + A, -B, a.d) >= 0
    )


@dataclass(frozen=True)
class PairSearchResult:
    d: int
    bound: int
    box: int
    pairs: list
    truncated: bool
    primes_scanned: int


def prime_pair_search(d, bound, box, cap=1000, budget=None):
    """Pairs of distinct prime elements of A_0(box) with |sigma(a1 - a2)| <= bound.

    Primes are visited in increasing half-coordinate order (trace first); a
    pair (a1, a2) is reported when its later member a2 is reached, so the
    output is the set of qualifying pairs among the first primes visited,
    ordered by (a2, a1).  The scan stops after ``cap`` pairs.
    """
    _check_d(d)
    if bound < 1:
        return PairSearchResult(d, bound, box, [], False, 0)
    check_budget(int(2 * box * box / math.sqrt(d)) + 1, budget, f"A_0({box}) in Q(sqrt {d})")
    limit = box * box
    sieve = prime_sieve(limit)

    def ptest(n):
        return bool(sieve[n]) if n <= limit else is_prime_int(n)

    seen = []
    pairs = []
    for A, B in _half_coords_a0(d, box):
        a = QuadInt.from_half(d, A, B)
        if a.is_unit() or not is_prime_element(a, ptest):
            continue
        for b in seen:
            if embedding_gap_ok(a, b, bound):
                pairs.append((b, a))
                if len(pairs) >= cap:
                    return PairSearchResult(d, bound, box, pairs, True, len(seen) + 1)
        seen.append(a)
    return PairSearchResult(d, bound, box, pairs, False, len(seen))

