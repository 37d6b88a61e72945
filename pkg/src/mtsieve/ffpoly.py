"""Polynomials over prime fields F_q.

Polynomials are immutable and store their coefficients in ascending degree,
so ``Poly.from_coeffs(3, [1, 0, 1])`` is t^2 + 1 over F_3.  The zero
polynomial has an empty coefficient tuple.  The text form used throughout the
package is the comma-separated coefficient list ("1,0,1").

Monic polynomials of a fixed degree n are enumerated in lexicographic order of
their coefficient sequences (c_0, ..., c_{n-1}), with c_0 varying slowest.
The same order defines the integer *index* of a monic polynomial, used by the
vectorized irreducibility sieve.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._util import check_budget, is_prime_int, moebius_int


class FieldMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PrimeField:
    q: int

    def __post_init__(self):
        if not isinstance(self.q, (int, np.integer)) or not is_prime_int(int(self.q)):
            raise ValueError(f"q={self.q!r} is not prime")
        object.__setattr__(self, "q", int(self.q))

    def inv(self, a):
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_q")
        return pow(a, self.q - 2, self.q)


def _trim(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


@dataclass(frozen=True, eq=True)
class Poly:
    field: PrimeField
    coeffs: tuple

    def __post_init__(self):
        q = self.field.q
        object.__setattr__(self, "coeffs", _trim([int(c) % q for c in self.coeffs]))

    # -- construction ---------------------------------------------------
    @classmethod
    def from_coeffs(cls, q, coeffs):
        return cls(PrimeField(q), tuple(coeffs))

    @classmethod
    def parse(cls, q, text):
        """Parse the "c0,c1,...,cn" text form (ascending degree)."""
        text = text.strip()
        if text in ("", "0"):
            return cls(PrimeField(q), ())
        return cls(PrimeField(q), tuple(int(tok) for tok in text.split(",")))

    @classmethod
    def monomial(cls, q, a, d):
        return cls(PrimeField(q), (0,) * d + (a,))

    @classmethod
    def t(cls, q):
        return cls(PrimeField(q), (0, 1))

    # -- basic properties -------------------------------------------------
    @property
    def q(self):
        return self.field.q

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self):
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no monic associate")
        inv = self.field.inv(self.coeffs[-1])
        return Poly(self.field, tuple(c * inv for c in self.coeffs))

    def scale(self, a):
        return Poly(self.field, tuple(c * a for c in self.coeffs))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.q
        return acc

    def to_text(self):
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    def to_json(self):
        return list(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mon = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            coef = str(c) if (c != 1 or i == 0) else ""
            parts.append(coef + ("*" if coef and mon else "") + mon)
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly(q={self.q}, {self})"

    def __lt__(self, other):
        return (self.degree, self.coeffs) < (other.degree, other.coeffs)

    # -- operators --------------------------------------------------------
    def _same(self, other):
        if isinstance(other, int):
            return Poly(self.field, (other,))
        if not isinstance(other, Poly):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch(f"F_{self.q} vs F_{other.q}")
        return other

    def __add__(self, other):
        return poly_arith(self, self._same(other), "add")

    __radd__ = __add__

    def __sub__(self, other):
        return poly_arith(self, self._same(other), "sub")

    def __rsub__(self, other):
        return poly_arith(self._same(other), self, "sub")

    def __neg__(self):
        return Poly(self.field, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        return poly_arith(self, self._same(other), "mul")

    __rmul__ = __mul__

    def __mod__(self, other):
        return poly_arith(self, self._same(other), "rem")

    def __floordiv__(self, other):
        return Poly(self.field, _divmod(self.coeffs, self._same(other).coeffs, self.q)[0])

    def __divmod__(self, other):
        qt, r = _divmod(self.coeffs, self._same(other).coeffs, self.q)
        return Poly(self.field, qt), Poly(self.field, r)


# -- tuple-level kernels ------------------------------------------------------

def _add(a, b, q):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % q for i in range(n)])


def _sub(a, b, q):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % q for i in range(n)])


def _mul(a, b, q):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % q for c in out])


def _divmod(a, b, q):
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return (), tuple(r)
    inv = pow(b[-1], q - 2, q)
    qt = [0] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] % q
        if c:
            f = c * inv % q
            qt[i - db] = f
            for j in range(db + 1):
                r[i - db + j] = (r[i - db + j] - f * b[j]) % q
    return _trim(qt), _trim([c % q for c in r[:db]])


def _rem(a, b, q):
    return _divmod(a, b, q)[1]


def _powmod(a, e, m, q):
    result = (1,)
    base = _rem(a, m, q)
    while e:
        if e & 1:
            result = _rem(_mul(result, base, q), m, q)
        base = _rem(_mul(base, base, q), m, q)
        e >>= 1
    return _rem(result, m, q)


def _gcd(a, b, q):
    while b:
        a, b = b, _rem(a, b, q)
    if a:
        inv = pow(a[-1], q - 2, q)
        a = tuple(c * inv % q for c in a)
    return a


def poly_arith(a, b, op, exponent=None, modulus=None):
    """Exact arithmetic on polynomials over the same prime field.

    ``op`` is one of "add", "sub", "mul", "rem", "powmod".  For "powmod" the
    result is ``a ** exponent mod b``; ``b`` is the modulus.
    """
    if a.field != b.field:
        raise FieldMismatch(f"F_{a.q} vs F_{b.q}")
    q = a.q
    if op == "add":
        c = _add(a.coeffs, b.coeffs, q)
    elif op == "sub":
        c = _sub(a.coeffs, b.coeffs, q)
    elif op == "mul":
        c = _mul(a.coeffs, b.coeffs, q)
    elif op == "rem":
        c = _rem(a.coeffs, b.coeffs, q)
    elif op == "powmod":
        if exponent is None or exponent < 0:
            raise ValueError("powmod needs a nonnegative exponent")
        if not b.coeffs:
            raise ZeroDivisionError("powmod modulo the zero polynomial")
        c = _powmod(a.coeffs, exponent, b.coeffs, q)
    else:
        raise ValueError(f"unknown op {op!r}")
    return Poly(a.field, c)


def poly_gcd(a, b):
    """Monic gcd (zero if both are zero)."""
    if a.field != b.field:
        raise FieldMismatch(f"F_{a.q} vs F_{b.q}")
    return Poly(a.field, _gcd(a.coeffs, b.coeffs, a.q))


def poly_inverse_mod(a, m):
    """Inverse of a modulo m; raises ValueError when gcd(a, m) != 1."""
    q = a.q
    r0, r1 = m.coeffs, _rem(a.coeffs, m.coeffs, q)
    s0, s1 = (), (1,)
    while r1:
        qt, r = _divmod(r0, r1, q)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(s0, _mul(qt, s1, q), q)
    if len(r0) != 1:
        raise ValueError("not invertible modulo m")
    inv = pow(r0[0], q - 2, q)
    return Poly(a.field, _rem(tuple(c * inv for c in s0), m.coeffs, q))


# -- irreducibility -----------------------------------------------------------

def _is_irreducible_coeffs(f, q):
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    inv = pow(f[-1], q - 2, q)
    f = tuple(c * inv % q for c in f)
    t = (0, 1)
    h = t
    # f is irreducible iff gcd(t^{q^i} - t, f) = 1 for all i <= n/2
    for _ in range(n // 2):
        h = _powmod(h, q, f, q)
        g = _gcd(_sub(h, t, q), f, q)
        if len(g) > 1:
            return False
    return True


def is_irreducible(f):
    """Distinct-degree irreducibility test over F_q.

    Constants are not irreducible and every degree-one polynomial is.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has no irreducibility status")
    return _is_irreducible_coeffs(f.coeffs, f.q)


def count_irreducibles(q, n):
    """Exact number of monic irreducibles of degree n, (1/n) sum_{e|n} mu(e) q^(n/e)."""
    if n < 1:
        raise ValueError("degree must be at least 1")
    PrimeField(q)
    total = sum(moebius_int(e) * q ** (n // e) for e in range(1, n + 1) if n % e == 0)
    return total // n


# -- enumeration --------------------------------------------------------------

def _digits(q, n):
    """All coefficient vectors (c_0..c_{n-1}) in lexicographic order, shape (q^n, n)."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((q,) * n, dtype=np.int64).reshape(n, -1)
    return grids.T.copy()


def monic_index(coeffs, q):
    """Lexicographic index of a monic polynomial from its ascending coefficients."""
    n = len(coeffs) - 1
    idx = 0
    for i in range(n):
        idx = idx * q + coeffs[i]
    return idx


def _index_weights(q, n):
    return q ** np.arange(n - 1, -1, -1, dtype=np.int64)


@lru_cache(maxsize=64)
def irreducible_mask(q, n):
    """Boolean array over lexicographic indices of monic degree-n polynomials.

    Built by sieving: every product of a monic irreducible of degree a <= n/2
    with a monic polynomial of degree n - a is struck out.
    """
    PrimeField(q)
    if n < 1:
        return np.zeros(1, dtype=bool)
    mask = np.ones(q**n, dtype=bool)
    if n == 1:
        mask.flags.writeable = False
        return mask
    w = _index_weights(q, n)
    for a in range(1, n // 2 + 1):
        fa = _digits(q, a)[irreducible_mask(q, a)]
        g = _digits(q, n - a)
        g = np.hstack([g, np.ones((g.shape[0], 1), dtype=np.int64)])
        for f in fa:
            fc = np.append(f, 1)
            prod = np.zeros((g.shape[0], n + 1), dtype=np.int64)
            for i, c in enumerate(fc):
                if c:
                    prod[:, i : i + n - a + 1] += c * g
            prod %= q
            mask[prod[:, :n] @ w] = False
    mask.flags.writeable = False
    return mask


def monic_digits(q, n, only_irreducible=False, budget=None):
    """Coefficient array (rows c_0..c_{n-1}, leading 1 implied) in lexicographic order."""
    check_budget(q**n, budget, f"monic polynomials of degree {n} over F_{q}")
    d = _digits(q, n)
    if only_irreducible:
        d = d[irreducible_mask(q, n)]
    return d


def enumerate_monic(q, n, only_irreducible=False, budget=None):
    """Yield the monic degree-n polynomials over F_q in lexicographic order."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    field = PrimeField(q)
    if only_irreducible and n == 0:
        return
    check_budget(q**n, budget, f"monic polynomials of degree {n} over F_{q}")
    if only_irreducible:
        for row in monic_digits(q, n, True, budget):
            yield Poly(field, tuple(int(c) for c in row) + (1,))
        return
    for c in itertools.product(range(q), repeat=n):
        yield Poly(field, c + (1,))


def batch_rem(digits, q, m):
    """Remainders of many monic polynomials modulo a monic m, vectorized.

    ``digits`` has rows (c_0..c_{n-1}); the leading 1 is implied.  Returns an
    array of shape (rows, deg m) holding the remainder coefficients.
    """
    rows, n = digits.shape
    dm = m.degree
    if dm == 0:
        return np.zeros((rows, 0), dtype=np.int64)
    work = np.hstack([digits, np.ones((rows, 1), dtype=np.int64)]) % q
    if dm > n:
        return np.hstack([work, np.zeros((rows, dm - n - 1), dtype=np.int64)])
    mc = np.array(m.coeffs, dtype=np.int64)
    for j in range(n, dm - 1, -1):
        c = work[:, j].copy()
        work[:, j - dm : j + 1] -= c[:, None] * mc[None, :]
        work[:, j - dm : j + 1] %= q
    return work[:, :dm]
