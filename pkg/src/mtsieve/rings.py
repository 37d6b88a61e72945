"""A uniform view of the three rings: Z, F_q[t] and real quadratic O_K.

Each ring comes with its box A(N), ideals (``Modulus``), norm, Euler phi,
Moebius function, primes and the residue of its zeta function at s = 1.
Elements are plain ``int`` for Z, ``Poly`` for F_q[t] and ``QuadInt`` for O_K.
"""

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import reduce

from . import quadratic as qf
from ._util import check_budget, factor_int, is_prime_int, primes_below
from .ffpoly import PrimeField, Poly, _gcd, _rem, enumerate_monic, is_irreducible

INTEGERS = "Z"
POLY = "Fq[t]"
QUADRATIC = "Q(sqrt)"


@dataclass(frozen=True)
class RingDescriptor:
    kind: str
    q: int = 0
    d: int = 0

    def __post_init__(self):
        if self.kind == POLY:
            PrimeField(self.q)
        elif self.kind == QUADRATIC:
            if self.d not in qf.WHITELIST:
                raise ValueError(f"Q(sqrt {self.d}) is not supported; use one of {qf.WHITELIST}")
        elif self.kind != INTEGERS:
            raise ValueError(f"unknown ring kind {self.kind!r}")

    @classmethod
    def integers(cls):
        return cls(INTEGERS)

    @classmethod
    def poly(cls, q):
        return cls(POLY, q=q)

    @classmethod
    def quadratic(cls, d):
        return cls(QUADRATIC, d=d)

    @classmethod
    def parse(cls, text):
        """Parse "Z", "Fq[t]:q=3" or "Q(sqrt:2)" (also accepts "sqrt:2")."""
        s = text.strip().replace(" ", "")
        if s == "Z":
            return cls.integers()
        m = re.fullmatch(r"Fq\[t\]:q=(\d+)", s)
        if m:
            return cls.poly(int(m.group(1)))
        m = re.fullmatch(r"(?:Q\()?sqrt:(\d+)\)?", s)
        if m:
            return cls.quadratic(int(m.group(1)))
        raise ValueError(f"cannot parse ring selector {text!r}")

    @property
    def label(self):
        if self.kind == POLY:
            return f"Fq[t]:q={self.q}"
        if self.kind == QUADRATIC:
            return f"Q(sqrt:{self.d})"
        return "Z"

    @property
    def boundary_exponent(self):
        return 0.5 if self.kind == QUADRATIC else 1.0

    @property
    def is_integers(self):
        return self.kind == INTEGERS

    @property
    def is_poly(self):
        return self.kind == POLY

    @property
    def is_quadratic(self):
        return self.kind == QUADRATIC

    def __str__(self):
        return self.label

    # -- element helpers ------------------------------------------------------
    def element(self, value):
        """Coerce int / coefficient sequence / (x, y) pair into a ring element."""
        if self.is_integers:
            return int(value)
        if self.is_poly:
            if isinstance(value, Poly):
                return value
            if isinstance(value, int):
                return Poly.from_coeffs(self.q, (value,))
            return Poly.from_coeffs(self.q, value)
        if isinstance(value, qf.QuadInt):
            return value
        if isinstance(value, int):
            return qf.QuadInt(self.d, value, 0)
        x, y = value
        return qf.QuadInt(self.d, int(x), int(y))

    def zero(self):
        return self.element(0)

    def element_to_json(self, a):
        if self.is_integers:
            return int(a)
        if self.is_poly:
            return a.to_json()
        return [a.x, a.y]


def _require_not_quadratic(ring, what):
    if ring.is_quadratic:
        raise NotImplementedError(f"{what} is not available for {ring.label}")


# -- moduli -------------------------------------------------------------------------

def _prime_norm(ring, p):
    if ring.is_integers:
        return p
    if ring.is_poly:
        return ring.q ** p.degree
    return p.norm


def _prime_key(ring, p):
    if ring.is_poly:
        return (p.degree, p.coeffs)
    if ring.is_quadratic:
        return (p.norm, p.p, p.root)
    return p


def _factor_poly(f):
    """Monic factorization of a monic polynomial by trial division."""
    q = f.q
    rest = f.coeffs
    out = []
    deg = 1
    while 2 * deg <= len(rest) - 1:
        for P in enumerate_monic(q, deg, only_irreducible=True):
            e = 0
            while True:
                qt, r = divmod(Poly(f.field, rest), P)
                if r.coeffs:
                    break
                rest = qt.coeffs
                e += 1
            if e:
                out.append((P, e))
        deg += 1
    if len(rest) > 1:
        out.append((Poly(f.field, rest), 1))
    return out


def factor(ring, value):
    """Factor a nonzero ring value into prime moduli: [(prime, exponent), ...]."""
    if ring.is_integers:
        return factor_int(abs(value))
    if ring.is_poly:
        return _factor_poly(value.monic())
    raise NotImplementedError("factor real quadratic moduli via Modulus.from_primes")


@dataclass(frozen=True)
class Modulus:
    """A nonzero ideal, stored by a canonical generator and its factorization.

    ``value`` is a positive int (Z), a monic ``Poly`` (F_q[t]) or, for real
    quadratic rings, a sorted tuple of distinct ``PrimeIdeal`` (only squarefree
    products are representable there).
    """

    ring: RingDescriptor
    value: object
    factors: tuple = field(compare=False, hash=False, repr=False, default=None)

    def __post_init__(self):
        if self.factors is None:
            if self.ring.is_quadratic:
                fs = tuple((P, 1) for P in self.value)
            else:
                fs = tuple(factor(self.ring, self.value))
            object.__setattr__(self, "factors", fs)

    @classmethod
    def of(cls, ring, value):
        if ring.is_integers:
            if value == 0:
                raise ValueError("zero ideal")
            return cls(ring, abs(int(value)))
        if ring.is_poly:
            v = ring.element(value)
            if v.is_zero():
                raise ValueError("zero ideal")
            return cls(ring, v.monic())
        primes = tuple(sorted(value, key=lambda P: (P.norm, P.p, P.root)))
        if len(set(primes)) != len(primes):
            raise ValueError("only squarefree real quadratic moduli are representable")
        return cls(ring, primes)

    @classmethod
    def from_primes(cls, ring, primes):
        """Squarefree modulus from distinct primes, factorization known."""
        primes = sorted(primes, key=lambda P: _prime_key(ring, P))
        if ring.is_integers:
            val = math.prod(primes)
        elif ring.is_poly:
            val = reduce(lambda a, b: a * b, primes, Poly.from_coeffs(ring.q, (1,)))
        else:
            val = tuple(primes)
        return cls(ring, val, tuple((P, 1) for P in primes))

    @classmethod
    def unit(cls, ring):
        return cls.from_primes(ring, [])

    @property
    def primes(self):
        return tuple(p for p, _ in self.factors)

    @property
    def prime_keys(self):
        return frozenset(_prime_key(self.ring, p) for p in self.primes)

    def is_unit(self):
        return not self.factors

    def is_squarefree(self):
        return all(e == 1 for _, e in self.factors)

    def coprime_to(self, other):
        return not (self.prime_keys & other.prime_keys)

    def divides(self, a):
        """Whether the ideal contains the ring element a."""
        if self.ring.is_integers:
            return a % self.value == 0
        if self.ring.is_poly:
            return not _rem(a.coeffs, self.value.coeffs, self.ring.q)
        return all(P.residue(a) in (0, (0, 0)) for P in self.primes)

    def reduce(self, a):
        """Hashable residue of a modulo this ideal."""
        if self.ring.is_integers:
            return a % self.value
        if self.ring.is_poly:
            return _rem(a.coeffs, self.value.coeffs, self.ring.q)
        return tuple(P.residue(a) for P in self.primes)

    def __mul__(self, other):
        if self.ring.is_quadratic:
            return Modulus.of(self.ring, self.value + other.value)
        if self.ring.is_integers:
            return Modulus.of(self.ring, self.value * other.value)
        return Modulus.of(self.ring, self.value * other.value)

    def to_json(self):
        if self.ring.is_integers:
            return self.value
        if self.ring.is_poly:
            return self.value.to_json()
        return [[P.p, P.kind, P.root] for P in self.value]

    def __str__(self):
        if self.ring.is_quadratic:
            return "*".join(str(P) for P in self.value) or "(1)"
        return str(self.value)


def norm(m):
    """|A/m|."""
    return math.prod(_prime_norm(m.ring, p) ** e for p, e in m.factors)


def euler_phi(m):
    """|(A/m)^x| = prod (|p| - 1) |p|^(e-1)."""
    out = 1
    for p, e in m.factors:
        n = _prime_norm(m.ring, p)
        out *= (n - 1) * n ** (e - 1)
    return out


def moebius(m):
    if not m.is_squarefree():
        return 0
    return -1 if len(m.factors) % 2 else 1


def zeta_residue(ring):
    """Residue at s = 1 of zeta_A: 1 for Z and 1/log q for F_q[t]."""
    _require_not_quadratic(ring, "the zeta residue")
    if ring.is_integers:
        return 1.0
    return 1.0 / math.log(ring.q)


# -- primes -----------------------------------------------------------------------

def primes_of_norm_at_most(ring, bound):
    """Prime elements (Z: int, F_q[t]: monic irreducible) or prime ideals of norm <= bound."""
    if ring.is_integers:
        return primes_below(int(bound) + 1)
    if ring.is_poly:
        out = []
        deg = 1
        while ring.q**deg <= bound:
            out.extend(enumerate_monic(ring.q, deg, only_irreducible=True))
            deg += 1
        return out
    return qf.prime_ideals_up_to(ring.d, int(bound))


def prime_norm(ring, p):
    return _prime_norm(ring, p)


def is_prime_element(ring, a):
    """Membership in P: rational primes, monic irreducibles, prime elements of O_K."""
    if ring.is_integers:
        return is_prime_int(a)
    if ring.is_poly:
        return a.is_monic() and is_irreducible(a)
    return qf.is_prime_element(a)


def primorial_w(ring, D0):
    """Product of all primes of norm < D0."""
    _require_not_quadratic(ring, "primorial_w")
    return Modulus.from_primes(ring, primes_of_norm_at_most(ring, math.ceil(D0) - 1))


def enumerate_squarefree_moduli(ring, R, coprime_to=None):
    """Squarefree moduli of norm < R coprime to ``coprime_to``, each exactly once.

    Built as products of distinct primes so their factorizations are known.
    Ordered by (norm, prime keys).
    """
    _require_not_quadratic(ring, "squarefree modulus enumeration")
    avoid = coprime_to.prime_keys if coprime_to is not None else frozenset()
    primes = [p for p in primes_of_norm_at_most(ring, math.ceil(R) - 1)
              if _prime_key(ring, p) not in avoid]
    primes.sort(key=lambda p: (_prime_norm(ring, p), _prime_key(ring, p)))
    out = []

    def rec(start, chosen, nrm):
        out.append((nrm, [_prime_key(ring, p) for p in chosen], list(chosen)))
        for i in range(start, len(primes)):
            n2 = nrm * _prime_norm(ring, primes[i])
            if n2 >= R:
                break
            chosen.append(primes[i])
            rec(i + 1, chosen, n2)
            chosen.pop()

    rec(0, [], 1)
    out.sort(key=lambda t: (t[0], t[1]))
    return [Modulus.from_primes(ring, ch) for _, _, ch in out]


# -- boxes ------------------------------------------------------------------------

@dataclass(frozen=True)
class BoxSpec:
    ring: RingDescriptor
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")
        if self.ring.is_poly:
            n = round(math.log(self.N, self.ring.q))
            if self.ring.q**n != self.N:
                raise ValueError(f"N={self.N} is not a power of q={self.ring.q}")

    @property
    def degree(self):
        return round(math.log(self.N, self.ring.q))

    def size(self):
        """|A(N)| for Z and F_q[t]."""
        _require_not_quadratic(self.ring, "closed-form box size")
        return self.N


def enumerate_box(box, budget=None):
    """Yield each element of A(N) once."""
    ring = box.ring
    if ring.is_integers:
        check_budget(box.N, budget, f"A({box.N})")
        yield from range(box.N + 1, 2 * box.N + 1)
    elif ring.is_poly:
        yield from enumerate_monic(ring.q, box.degree, budget=budget)
    else:
        yield from qf.enumerate_quadratic_box(ring.d, box.N, budget)


def enumerate_a0(ring, N, budget=None):
    if not ring.is_quadratic:
        raise ValueError("A_0 is only defined here for real quadratic rings")
    return qf.enumerate_a0(ring.d, N, budget)


def residue_classes(m):
    """Every residue of A/m, as produced by ``Modulus.reduce`` (Z and F_q[t] only)."""
    ring = m.ring
    if ring.is_integers:
        return list(range(m.value))
    if ring.is_poly:

        deg = m.value.degree
        return [Poly.from_coeffs(ring.q, c).coeffs for c in itertools.product(range(ring.q), repeat=deg)]
    raise NotImplementedError


def poly_gcd_is_one(a, b):
    return len(_gcd(a.coeffs, b.coeffs, a.q)) == 1
