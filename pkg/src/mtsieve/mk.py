"""Variational lower bounds for M_k.

F ranges over symmetric polynomials spanned by (1 - P1)^a * P2^b with
P1 = sum x_i, P2 = sum x_i^2, restricted to the simplex
R_k = {x in [0,1]^k : sum x_i <= 1}.  For such F

    I_k(F)          = integral over R_k of F^2,
    sum_m J_k^(m)(F) = k * integral over R_{k-1} of (integral_0^{1-s} F dx_k)^2,

are quadratic forms whose Gram matrices are assembled exactly, in
``fractions.Fraction``, from the Dirichlet moment

    int_{R_k} prod x_i^{a_i} (1 - sum x_i)^c dx = prod(a_i!) c! / (k + c + sum a_i)!

summed over partitions of the P2 exponent, so no k-variable expansion is ever
formed.  The eigenproblem is solved in floating point and the resulting
coefficient vector is re-evaluated exactly, so ``lower_bound`` is a true
lower bound for M_k.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np
import scipy.linalg


class SingularFormError(ValueError):
    """The I-form is singular on the basis span (redundant generators)."""


def default_degree(k):
    return 11 if k > 20 else 7


@dataclass(frozen=True)
class SymmetricBasis:
    k: int
    generators: tuple
    degree_bound: int

    def __post_init__(self):
        gens = tuple(tuple(g) for g in self.generators)
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generators")
        for a, b in gens:
            if a < 0 or b < 0 or a + 2 * b > self.degree_bound:
                raise ValueError(f"generator {(a, b)} exceeds degree bound {self.degree_bound}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def full(cls, k, degree_bound):
        """All (a, b) with a + 2b <= degree_bound, ordered by degree then b."""
        gens = [(a, b) for b in range(degree_bound // 2 + 1) for a in range(degree_bound - 2 * b + 1)]
        gens.sort(key=lambda g: (g[0] + 2 * g[1], g[1]))
        return cls(k, tuple(gens), degree_bound)

    def __len__(self):
        return len(self.generators)


@dataclass(frozen=True)
class QuadraticFormPair:
    M1: tuple
    M2: tuple
    basis: SymmetricBasis

    def I(self, coeffs):
        return _quad(self.M1, coeffs)

    def J(self, coeffs):
        return _quad(self.M2, coeffs)


@dataclass(frozen=True)
class MkResult:
    k: int
    lower_bound: float
    exact_quotient: Fraction
    coefficient_vector: tuple
    residual: float
    degree_bound: int
    basis: SymmetricBasis
    float_eigenvalue: float


# -- exact integrals ----------------------------------------------------------------

def monomial_simplex_integral(k, exponents, c=0):
    """Exact value of int_{R_k} prod x_i^{a_i} (1 - sum x_i)^c dx."""
    exponents = tuple(exponents)
    if len(exponents) != k:
        raise ValueError("need one exponent per coordinate")
    if c < 0 or any(a < 0 for a in exponents):
        raise ValueError("exponents must be nonnegative")
    num = factorial(c)
    for a in exponents:
        num *= factorial(a)
    return Fraction(num, factorial(k + c + sum(exponents)))


def _partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for p in range(min(n, largest), 0, -1):
        for rest in _partitions(n - p, p):
            yield (p,) + rest


@lru_cache(maxsize=None)
def _p2_power_weight(k, c):
    # sum over monomials of P2^c of (multinomial) * prod (2 e_i)!, grouped by partition
    total = 0
    for lam in _partitions(c):
        r = len(lam)
        if r > k:
            continue
        mult = {}
        for part in lam:
            mult[part] = mult.get(part, 0) + 1
        placements = factorial(k) // factorial(k - r)
        for m in mult.values():
            placements //= factorial(m)
        w = placements
        for part in lam:
            w *= factorial(2 * part) // factorial(part)
        total += w
    return total * factorial(c)


@lru_cache(maxsize=None)
def simplex_moment(k, a, c):
    """Exact int_{R_k} (1 - P1)^a P2^c dx; k = 0 is the point evaluation."""
    return Fraction(factorial(a) * _p2_power_weight(k, c), factorial(k + a + 2 * c))


def _inner_integral(a, b):
    """int_0^{1-s} (1-s-x)^a (P2' + x^2)^b dx as [(e, f, coef)] meaning coef (1-s)^e P2'^f."""
    return [
        (a + 2 * j + 1, b - j, Fraction(comb(b, j) * factorial(a) * factorial(2 * j), factorial(a + 2 * j + 1)))
        for j in range(b + 1)
    ]


def _row(args):
    k, gens, i = args
    ai, bi = gens[i]
    inner_i = _inner_integral(ai, bi)
    r1, r2 = [], []
    for j in range(i, len(gens)):
        aj, bj = gens[j]
        r1.append(simplex_moment(k, ai + aj, bi + bj))
        acc = Fraction(0)
        for e1, f1, c1 in inner_i:
            for e2, f2, c2 in _inner_integral(aj, bj):
                acc += c1 * c2 * simplex_moment(k - 1, e1 + e2, f1 + f2)
        r2.append(k * acc)
    return r1, r2


def build_forms(basis, workers=1):
    """Exact Gram matrices of I_k and sum_m J_k^(m) on the basis."""
    k, gens = basis.k, basis.generators
    n = len(gens)
    jobs = [(k, gens, i) for i in range(n)]
    if workers > 1 and n > 1:
        with ProcessPoolExecutor(workers) as ex:
            rows = list(ex.map(_row, jobs))
    else:
        rows = [_row(job) for job in jobs]
    M1 = [[None] * n for _ in range(n)]
    M2 = [[None] * n for _ in range(n)]
    for i, (r1, r2) in enumerate(rows):
        for off, (x1, x2) in enumerate(zip(r1, r2)):
            j = i + off
            M1[i][j] = M1[j][i] = x1
            M2[i][j] = M2[j][i] = x2
    return QuadraticFormPair(tuple(map(tuple, M1)), tuple(map(tuple, M2)), basis)


def _quad(M, v):
    n = len(v)
    return sum(v[i] * M[i][j] * v[j] for i in range(n) for j in range(n))


# -- exact linear algebra ----------------------------------------------------------------

def _integer_matrix(M):
    den = 1
    for row in M:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    return [[int(x * den) for x in row] for row in M]


def leading_minors(M):
    """Exact leading principal minors (up to a common positive scale) via Bareiss elimination."""
    A = _integer_matrix(M)
    n = len(A)
    minors = []
    prev = 1
    for kk in range(n):
        piv = A[kk][kk]
        minors.append(piv)
        if piv == 0:
            break
        for i in range(kk + 1, n):
            for j in range(kk + 1, n):
                A[i][j] = (A[i][j] * piv - A[i][kk] * A[kk][j]) // prev
        prev = piv
    return minors


def is_positive_definite(M):
    m = leading_minors(M)
    return len(m) == len(M) and all(x > 0 for x in m)


def independent_generators(basis, forms=None):
    """Greedy maximal subset of generators with nonsingular I-form (exact)."""
    forms = forms or build_forms(basis)
    keep = []
    for i in range(len(basis)):
        trial = keep + [i]
        sub = [[forms.M1[a][b] for b in trial] for a in trial]
        if is_positive_definite(sub):
            keep.append(i)
    return keep


def _restrict(forms, idx):
    gens = tuple(forms.basis.generators[i] for i in idx)
    basis = SymmetricBasis(forms.basis.k, gens, forms.basis.degree_bound)
    M1 = tuple(tuple(forms.M1[a][b] for b in idx) for a in idx)
    M2 = tuple(tuple(forms.M2[a][b] for b in idx) for a in idx)
    return QuadraticFormPair(M1, M2, basis)


def _float_floor(x):
    """Largest float <= the rational x."""
    f = float(x)
    if Fraction(f) > x:
        f = math.nextafter(f, -math.inf)
    return f


# -- eigenproblem ----------------------------------------------------------------------

def solve_forms(forms):
    """Largest generalized eigenpair of (M2, M1), with exact Rayleigh re-verification."""
    if not is_positive_definite(forms.M1):
        raise SingularFormError("I-form is not positive definite on this basis; reduce the basis")
    scale = forms.M1[0][0]
    A = np.array([[float(x / scale) for x in row] for row in forms.M1])
    B = np.array([[float(x / scale) for x in row] for row in forms.M2])
    s = 1.0 / np.sqrt(np.diag(A))
    A = A * s[:, None] * s[None, :]
    B = B * s[:, None] * s[None, :]
    w, V = scipy.linalg.eigh(B, A)
    lam = float(w[-1])
    v = V[:, -1] * s
    v = v / np.max(np.abs(v))
    if v[0] < 0:
        v = -v
    resid = np.linalg.norm((B - lam * A) @ (V[:, -1])) / np.linalg.norm(A @ V[:, -1])
    coeffs = tuple(Fraction(float(c)) for c in v)
    num = _quad(forms.M2, coeffs)
    den = _quad(forms.M1, coeffs)
    quotient = num / den
    return MkResult(
        k=forms.basis.k,
        lower_bound=_float_floor(quotient),
        exact_quotient=quotient,
        coefficient_vector=tuple(float(c) for c in coeffs),
        residual=float(resid),
        degree_bound=forms.basis.degree_bound,
        basis=forms.basis,
        float_eigenvalue=lam,
    )


def mk_lower_bound(k, degree_bound=None, prune_dependent=True, workers=1):
    """Certified lower bound for M_k over the full basis of the given degree.

    With ``prune_dependent`` (the default) generators that are linearly
    dependent on earlier ones are dropped; this only happens for k = 1, where
    P2 = P1^2.  Otherwise a singular I-form raises ``SingularFormError``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if degree_bound is None:
        degree_bound = default_degree(k)
    if degree_bound < 0:
        raise ValueError("degree_bound must be nonnegative")
    basis = SymmetricBasis.full(k, degree_bound)
    forms = build_forms(basis, workers)
    if not is_positive_definite(forms.M1):
        if not prune_dependent:
            raise SingularFormError("I-form is singular on the full basis")
        forms = _restrict(forms, independent_generators(basis, forms))
    return solve_forms(forms)


def r_k(theta, mk):
    """ceil(theta * M_k / 2), evaluated exactly on the given numbers."""
    if not 0 < theta <= 1:
        raise ValueError("theta must lie in (0, 1]")
    if mk <= 0:
        raise ValueError("M_k must be positive")
    return math.ceil(Fraction(theta) * Fraction(mk) / 2)


# -- evaluation and Monte Carlo ------------------------------------------------------------

def evaluate_F(generators, coeffs, x):
    """F(x) for an array of points x with shape (..., k); zero off the simplex."""
    x = np.asarray(x, dtype=float)
    p1 = x.sum(axis=-1)
    p2 = (x * x).sum(axis=-1)
    out = np.zeros_like(p1)
    for (a, b), c in zip(generators, coeffs):
        out += float(c) * (1.0 - p1) ** a * p2**b
    inside = (p1 <= 1.0) & np.all(x >= 0.0, axis=-1)
    return np.where(inside, out, 0.0)


def _F_power_sums(generators, coeffs, p1, p2):
    out = np.zeros(np.broadcast(p1, p2).shape)
    for (a, b), c in zip(generators, coeffs):
        out += float(c) * (1.0 - p1) ** a * p2**b
    return out


def _poly_in_q(fun, degree):
    """Coefficients of the polynomial fun(Q) of known degree, from values at Chebyshev nodes on [0, 1]."""
    nodes = 0.5 + 0.5 * np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1))
    vals = [fun(v) for v in nodes]
    return np.polynomial.Polynomial.fit(nodes, vals, degree, domain=[0, 1], window=[0, 1]).coef


def _face_samples(rng, n, dim, beta=6.0, eps=0.5):
    """Q = sum u_i^2 for u on the face sum u = 1 of R_dim, with weights (uniform density)/(proposal).

    The proposal mixes the uniform law with Dirichlet(beta at a random coordinate, 1, ..., 1),
    which oversamples the directions with one dominant coordinate where Q^m is large.
    """
    e = rng.exponential(size=(n, dim))
    boost = np.flatnonzero(rng.random(n) < eps)
    idx = rng.integers(0, dim, size=n)
    e[boost, idx[boost]] = rng.gamma(beta, size=len(boost))
    u = e / e.sum(axis=1, keepdims=True)
    c = math.exp(math.lgamma(beta + dim - 1) - math.lgamma(beta) - math.lgamma(dim))
    w = 1.0 / ((1 - eps) + eps * c * np.mean(u ** (beta - 1), axis=1))
    return np.sum(u * u, axis=1), w


def rayleigh_monte_carlo(k, generators, coeffs, samples=10**7, seed=0, chunk=1_000_000):
    """Monte Carlo estimate of sum_m J_k^(m)(F) / I_k(F), independent of the exact forms.

    F depends on x only through P1 and P2.  Writing x = s*u with u on the face
    sum u = 1 gives P1 = s and P2 = s^2 Q, Q = sum u_i^2.  The radial integral
    over s (and, for J, the inner integral over x_k) is done by Gauss-Legendre
    quadrature, exact for polynomial F, leaving a polynomial in Q whose
    expectation over uniform u is estimated by importance sampling.  F is
    symmetric, so the k terms J_k^(m) coincide.
    """
    bmax = max((b for _, b in generators), default=0)
    deg = max((a + 2 * b for a, b in generators), default=0)
    xs, ws = np.polynomial.legendre.leggauss(deg + k // 2 + 2)
    s, ws = (xs + 1) / 2, ws / 2
    xt, wt = np.polynomial.legendre.leggauss(deg // 2 + 2)

    def g_I(Q):
        return float(np.sum(ws * k * s ** (k - 1) * _F_power_sums(generators, coeffs, s, s * s * Q) ** 2))

    def inner(r, Q):
        L = 1.0 - r
        t = L[:, None] * (xt + 1) / 2
        return L / 2 * np.sum(wt * _F_power_sums(generators, coeffs, r[:, None] + t, (r * r * Q)[:, None] + t * t), axis=1)

    def g_J(Q):
        return float(np.sum(ws * (k - 1) * s ** (k - 2) * inner(s, Q) ** 2))

    c_I = _poly_in_q(g_I, 2 * bmax)
    rng = np.random.default_rng(seed)
    sum_I = sum_J = 0.0
    if k == 1:
        c_J, sum_J = None, float(samples * inner(np.zeros(1), 0.0)[0] ** 2)
    else:
        c_J = _poly_in_q(g_J, 2 * bmax)
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        Q, w = _face_samples(rng, n, k)
        sum_I += math.fsum(w * np.polynomial.polynomial.polyval(Q, c_I))
        if c_J is not None:
            Q, w = _face_samples(rng, n, k - 1)
            sum_J += math.fsum(w * np.polynomial.polynomial.polyval(Q, c_J))
        done += n
    I = sum_I / samples / math.factorial(k)
    J = k * sum_J / samples / math.factorial(k - 1)
    return J / I
