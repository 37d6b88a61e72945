"""Multidimensional Selberg sieve weights over Z and F_q[t], with brute-force checks.

A weight table maps a k-tuple of squarefree moduli to a float.  Tables are
keyed by tuples of ``Modulus`` and only ever contain tuples whose product is
squarefree, coprime to w and of norm below R.  The y-table uses the same
support as the lambda-table, which makes the two transforms exact inverses.

Empirical sums run over alpha in A(N) with alpha = v0 (mod w).  Per-alpha
terms are computed with numpy and combined with ``math.fsum``, so the result
does not depend on how the box is sharded across threads.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate

from . import mk
from ._util import check_budget, prime_sieve, primes_below
from .ffpoly import (
    Poly,
    _index_weights,
    _rem,
    batch_rem,
    count_irreducibles,
    irreducible_mask,
    monic_digits,
    poly_gcd,
    poly_inverse_mod,
)
from .rings import (
    BoxSpec,
    Modulus,
    enumerate_squarefree_moduli,
    euler_phi,
    moebius,
    norm,
    primes_of_norm_at_most,
    primorial_w,
    zeta_residue,
)
from .tuples import Tuple, is_admissible

DEFAULT_TABLE_CAP = 10**6


# -- parameters ------------------------------------------------------------------------

def _residue_order(q, deg):
    """Residues modulo a degree-deg polynomial, ordered by their value at t = q."""
    for n in range(q**deg):
        c = []
        for _ in range(deg):
            c.append(n % q)
            n //= q
        yield tuple(c)


def _find_v0(ring, elements, w):
    if ring.is_integers:
        v, mod = 0, 1
        for p in w.primes:
            r = next(r for r in range(p) if all((r + h) % p for h in elements))
            # CRT step: v = r mod p, v = old v mod old modulus
            t = ((r - v) * pow(mod, -1, p)) % p
            v, mod = v + mod * t, mod * p
        return v % w.value
    q = ring.q
    one = Poly.from_coeffs(q, (1,))
    v, mod = Poly.from_coeffs(q, ()), one
    for P in w.primes:
        r = None
        for c in _residue_order(q, P.degree):
            if all(_rem(tuple(((Poly.from_coeffs(q, c) + h).coeffs)), P.coeffs, q) for h in elements):
                r = Poly.from_coeffs(q, c)
                break
        t = ((r - v) * poly_inverse_mod(mod % P, P)) % P
        v, mod = v + mod * t, mod * P
    return v % w.value if w.value.degree > 0 else Poly.from_coeffs(q, ())


@dataclass(frozen=True)
class SieveParams:
    """Sieve setup: R = |A(N)|^(theta/2 - delta) unless ``R_override`` is given."""

    ring: object
    tuple: Tuple
    N: int
    theta: float = 0.5
    delta: float = 0.05
    D0: float = 7
    R_override: float = None
    box_size: int = field(init=False)
    R: float = field(init=False)
    w: Modulus = field(init=False)
    v0: object = field(init=False)

    def __post_init__(self):
        ring = self.ring
        if ring.is_quadratic:
            raise NotImplementedError("sieve weights are implemented over Z and F_q[t] only")
        if self.tuple.ring != ring:
            raise ValueError("tuple and parameters live in different rings")
        if not 0 < self.theta < 1:
            raise ValueError("theta must lie in (0, 1)")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        box = BoxSpec(ring, self.N)
        size = box.size()
        if ring.is_poly and any(h.degree >= box.degree for h in self.tuple.elements):
            raise ValueError("tuple elements must have degree below n so translates stay monic of degree n")
        rep = is_admissible(self.tuple)
        if not rep.admissible:
            raise ValueError(f"tuple is not admissible (covers every class modulo {rep.witness})")
        R = self.R_override if self.R_override is not None else size ** (self.theta / 2 - self.delta)
        if not R >= 2:
            raise ValueError(f"R = {R:.6g} is below 2; enlarge N or theta, or lower delta")
        w = primorial_w(ring, self.D0)
        object.__setattr__(self, "box_size", size)
        object.__setattr__(self, "R", float(R))
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "v0", _find_v0(ring, self.tuple.elements, w))

    @property
    def k(self):
        return self.tuple.k

    @property
    def log_R(self):
        return math.log(self.R)

    def to_json(self):
        return {
            "ring": self.ring.label,
            "tuple": self.tuple.to_json(),
            "N": self.N,
            "theta": self.theta,
            "delta": self.delta,
            "D0": self.D0,
            "R": self.R,
            "w": self.w.to_json(),
            "v0": self.ring.element_to_json(self.v0),
        }


# -- test functions ----------------------------------------------------------------------

@dataclass(frozen=True)
class TestFunctionF:
    """F = sum_j c_j (1 - P1)^a_j P2^b_j on the simplex R_k, zero outside it."""

    __test__ = False

    k: int
    generators: tuple
    coeffs: tuple

    def __post_init__(self):
        if len(self.generators) != len(self.coeffs):
            raise ValueError("one coefficient per generator")
        object.__setattr__(self, "generators", tuple(tuple(g) for g in self.generators))
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def power(cls, k, a=1):
        """(1 - x_1 - ... - x_k)^a on the simplex."""
        return cls(k, ((a, 0),), (1,))

    @classmethod
    def zero(cls, k):
        return cls(k, ((0, 0),), (0,))

    @classmethod
    def from_result(cls, result):
        return cls(result.k, result.basis.generators, result.coefficient_vector)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return float(mk.evaluate_F(self.generators, self.coeffs, x[None, :])[0])

    def evaluate(self, points):
        return mk.evaluate_F(self.generators, self.coeffs, points)

    @property
    def f_max(self):
        """Upper bound for sup|F| + sum_i sup|dF/dx_i| on the simplex.

        Each generator is at most 1 there and its partial derivatives sum to at
        most k*a + 2*b in absolute value.
        """
        return float(sum(abs(c) * (1 + self.k * a + 2 * b) for (a, b), c in zip(self.generators, self.coeffs)))

    def functionals(self):
        """Exact (I_k(F), sum_m J_k^(m)(F)) for rational coefficients."""
        deg = max(a + 2 * b for a, b in self.generators)
        basis = mk.SymmetricBasis(self.k, self.generators, deg)
        forms = mk.build_forms(basis)
        c = [Fraction(x) for x in self.coeffs]
        return forms.I(c), forms.J(c)


# -- weight tables -----------------------------------------------------------------------

@dataclass
class WeightSystem:
    params: SieveParams
    y: dict = field(default_factory=dict)
    lam: dict = field(default_factory=dict)

    @property
    def y_max(self):
        return max((abs(v) for v in self.y.values()), default=0.0)

    @property
    def lambda_max(self):
        return max((abs(v) for v in self.lam.values()), default=0.0)


class _Support:
    """Support moduli and the admissible k-tuples of them, with cached arithmetic."""

    def __init__(self, params, cap):
        self.params = params
        ring = params.ring
        self.moduli = enumerate_squarefree_moduli(ring, params.R, coprime_to=params.w)
        self.norm = {m: norm(m) for m in self.moduli}
        self.phi = {m: euler_phi(m) for m in self.moduli}
        self.mu = {m: moebius(m) for m in self.moduli}
        self.keys = {m: m.prime_keys for m in self.moduli}
        by_keys = {self.keys[m]: m for m in self.moduli}
        self.divisors = {}
        for m in self.moduli:
            ps = sorted(self.keys[m], key=repr)
            divs = []
            for r in range(len(ps) + 1):
                for sub in itertools.combinations(ps, r):
                    divs.append(by_keys[frozenset(sub)])
            self.divisors[m] = divs
        self.tuples = []
        k, R = params.k, params.R

        def rec(prefix, used, nrm):
            if len(prefix) == k:
                self.tuples.append(tuple(prefix))
                check_budget(len(self.tuples), cap, "weight table")
                return
            for m in self.moduli:
                n2 = nrm * self.norm[m]
                if n2 >= R:
                    break
                if self.keys[m] & used:
                    continue
                prefix.append(m)
                rec(prefix, used | self.keys[m], n2)
                prefix.pop()

        rec([], frozenset(), 1)
        self.tupleset = set(self.tuples)

    def divisor_tuples(self, r):
        return itertools.product(*(self.divisors[m] for m in r))


_SUPPORT_CACHE = {}


def _support(params, cap=DEFAULT_TABLE_CAP):
    key = (params, cap)
    if key not in _SUPPORT_CACHE:
        _SUPPORT_CACHE[key] = _Support(params, cap)
    return _SUPPORT_CACHE[key]


def support_tuples(params, cap=DEFAULT_TABLE_CAP):
    """k-tuples (d_1..d_k) with prod d_i squarefree, coprime to w and of norm < R."""
    return list(_support(params, cap).tuples)


def in_support(params, key):
    """The three support conditions, checked from scratch."""
    if len(key) != params.k:
        return False
    keys = [m.prime_keys for m in key]
    flat = [p for ks in keys for p in ks]
    if len(flat) != len(set(flat)) or not all(m.is_squarefree() for m in key):
        return False
    if any(not m.coprime_to(params.w) for m in key):
        return False
    return math.prod(norm(m) for m in key) < params.R


def compute_y_from_F(params, F, cap=DEFAULT_TABLE_CAP):
    """y_r = F(log|r_1|/log R, ..., log|r_k|/log R) on the support."""
    if F.k != params.k:
        raise ValueError("F has the wrong dimension")
    sup = _support(params, cap)
    logR = params.log_R
    y = {}
    for r in sup.tuples:
        y[r] = F([math.log(sup.norm[m]) / logR for m in r])
    return y


def compute_lambda_from_y(ws, cap=DEFAULT_TABLE_CAP):
    """lambda_d = prod mu(d_i)|d_i| * sum over r_i multiples of d_i of y_r / prod phi(r_i)."""
    sup = _support(ws.params, cap)
    acc = {d: [] for d in sup.tuples}
    for r in sup.tuples:
        v = ws.y.get(r, 0.0)
        if v == 0.0:
            continue
        term = v / math.prod(sup.phi[m] for m in r)
        for d in sup.divisor_tuples(r):
            acc[d].append(term)
    lam = {}
    for d in sup.tuples:
        pre = math.prod(sup.mu[m] * sup.norm[m] for m in d)
        lam[d] = pre * math.fsum(acc[d])
    return lam


def invert_lambda_to_y(ws, cap=DEFAULT_TABLE_CAP):
    """y_r = prod mu(r_i) phi(r_i) * sum over d_i multiples of r_i of lambda_d / prod |d_i|."""
    sup = _support(ws.params, cap)
    acc = {r: [] for r in sup.tuples}
    for d in sup.tuples:
        v = ws.lam.get(d, 0.0)
        if v == 0.0:
            continue
        term = v / math.prod(sup.norm[m] for m in d)
        for r in sup.divisor_tuples(d):
            acc[r].append(term)
    y = {}
    for r in sup.tuples:
        pre = math.prod(sup.mu[m] * sup.phi[m] for m in r)
        y[r] = pre * math.fsum(acc[r])
    return y


def weights_from_F(params, F, cap=DEFAULT_TABLE_CAP):
    ws = WeightSystem(params, compute_y_from_F(params, F, cap))
    ws.lam = compute_lambda_from_y(ws, cap)
    return ws


def _g(n):
    return n - 2


def compute_ym(ws, m, cap=DEFAULT_TABLE_CAP):
    """y^(m)_r for r with r_m = 1, with g(p) = |p| - 2; m counts from 1."""
    params = ws.params
    if not 1 <= m <= params.k:
        raise ValueError(f"m must lie in [1, {params.k}]")
    sup = _support(params, cap)
    for mod in sup.moduli:
        for p in mod.primes:
            if norm(Modulus.from_primes(params.ring, [p])) == 2:
                raise ValueError("a prime of norm 2 lies in the support; raise D0 so that w absorbs it")
    i = m - 1
    acc = {r: [] for r in sup.tuples if sup.norm[r[i]] == 1}
    for d in sup.tuples:
        if sup.norm[d[i]] != 1:
            continue
        v = ws.lam.get(d, 0.0)
        if v == 0.0:
            continue
        term = v / math.prod(sup.phi[x] for x in d)
        for r in sup.divisor_tuples(d):
            acc[r].append(term)
    out = {}
    for r, terms in acc.items():
        pre = 1
        for x in r:
            pre *= sup.mu[x] * math.prod(_g(norm(Modulus.from_primes(params.ring, [p]))) for p in x.primes)
        out[r] = pre * math.fsum(terms)
    return out


def ym_main_term(ws, m, cap=DEFAULT_TABLE_CAP):
    """sum over a of y_(r_1..a..r_k) / phi(a), the approximation to y^(m)_r when r_m = 1."""
    params = ws.params
    sup = _support(params, cap)
    i = m - 1
    acc = {r: [] for r in sup.tuples if sup.norm[r[i]] == 1}
    for r in sup.tuples:
        v = ws.y.get(r, 0.0)
        if v == 0.0:
            continue
        base = r[:i] + (Modulus.unit(params.ring),) + r[i + 1 :]
        acc[base].append(v / sup.phi[r[i]])
    return {r: math.fsum(t) for r, t in acc.items()}


# -- brute-force sums ------------------------------------------------------------------------

class _Box:
    """The residue-restricted box as numpy data: alpha + h_i for every i."""

    def __init__(self, params, budget):
        ring = params.ring
        check_budget(params.box_size, budget, f"A({params.N})")
        self.params = params
        if ring.is_integers:
            N = params.N
            w = params.w.value
            start = N + 1 + ((params.v0 - (N + 1)) % w)
            alpha = np.arange(start, 2 * N + 1, w, dtype=np.int64)
            self.translates = [alpha + h for h in params.tuple.elements]
            hi = 2 * N + max(0, max(params.tuple.elements))
            self._sieve = prime_sieve(hi)
        else:
            q = ring.q
            n = BoxSpec(ring, params.N).degree
            digits = monic_digits(q, n, budget=budget)
            wv = params.w.value
            if wv.degree > 0:
                v0 = np.zeros(wv.degree, dtype=np.int64)
                v0[: len(params.v0.coeffs)] = params.v0.coeffs
                keep = np.all(batch_rem(digits, q, wv) == v0[None, :], axis=1)
                digits = digits[keep]
            self.translates = []
            for h in params.tuple.elements:
                hc = np.zeros(n, dtype=np.int64)
                hc[: len(h.coeffs)] = h.coeffs
                self.translates.append((digits + hc[None, :]) % q)
            self._mask = irreducible_mask(q, n)
            self._weights = _index_weights(q, n)
            self.q = q
        self.size = len(self.translates[0])

    def chunk(self, lo, hi):
        return [t[lo:hi] for t in self.translates]

    def divisible(self, values, mod):
        if self.params.ring.is_integers:
            return values % mod.value == 0
        if mod.value.degree == 0:
            return np.ones(len(values), dtype=bool)
        return ~np.any(batch_rem(values, self.q, mod.value), axis=1)

    def prime_count(self, trans):
        cnt = np.zeros(len(trans[0]), dtype=np.int64)
        for t in trans:
            if self.params.ring.is_integers:
                ok = t >= 2
                cnt += np.where(ok, self._sieve[np.clip(t, 0, None)], False)
            else:
                cnt += self._mask[t @ self._weights]
        return cnt


def _inner_sums(box, lam, trans):
    n = len(trans[0])
    inner = np.zeros(n)
    cache = {}
    for d, v in lam.items():
        if v == 0.0:
            continue
        sel = np.ones(n, dtype=bool)
        for i, m in enumerate(d):
            key = (i, m)
            if key not in cache:
                cache[key] = box.divisible(trans[i], m)
            sel &= cache[key]
        inner += v * sel
    return inner


def _shards(size, workers):
    workers = max(1, workers)
    step = max(1, -(-size // workers))
    return [(lo, min(size, lo + step)) for lo in range(0, size, step)]


def brute_force_sums(ws, workers=1, budget=None):
    """Exact empirical (S1, S2) by iterating alpha in A(N) with alpha = v0 (mod w)."""
    box = _Box(ws.params, budget)
    lam = {d: ws.lam[d] for d in sorted(ws.lam, key=_table_order)}

    def work(bounds):
        trans = box.chunk(*bounds)
        inner = _inner_sums(box, lam, trans)
        sq = inner * inner
        return sq, sq * box.prime_count(trans)

    shards = _shards(box.size, workers) or [(0, 0)]
    if workers > 1 and len(shards) > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(work, shards))
    else:
        parts = [work(s) for s in shards]
    s1 = math.fsum(itertools.chain.from_iterable(p[0].tolist() for p in parts))
    s2 = math.fsum(itertools.chain.from_iterable(p[1].tolist() for p in parts))
    return s1, s2


def brute_force_S1(ws, workers=1, budget=None):
    return brute_force_sums(ws, workers, budget)[0]


def brute_force_S2(ws, workers=1, budget=None):
    return brute_force_sums(ws, workers, budget)[1]


def _table_order(key):
    return tuple((norm(m), repr(m.value)) for m in key)


# -- main terms ------------------------------------------------------------------------------

def prime_count_in_box(params):
    """|P(N)| exactly: an integer sieve on (N, 2N] or the necklace count."""
    if params.ring.is_integers:
        s = prime_sieve(2 * params.N)
        return int(s[params.N + 1 :].sum())
    return count_irreducibles(params.ring.q, BoxSpec(params.ring, params.N).degree)


def predicted_main_terms(params, F):
    """Main terms for S1 and S2 with c_A the zeta residue and |P(N)| exact."""
    I, J = F.functionals()
    k = params.k
    cA = zeta_residue(params.ring)
    W, phiW = norm(params.w), euler_phi(params.w)
    base = phiW**k / W ** (k + 1)
    L = cA * params.log_R
    s1 = base * params.box_size * L**k * float(I)
    s2 = base * prime_count_in_box(params) * L ** (k + 1) * float(J)
    return s1, s2


@dataclass(frozen=True)
class SieveReport:
    params: SieveParams
    S1_emp: float
    S1_pred: float
    S2_emp: float
    S2_pred: float
    y_max: float
    lambda_max: float
    f_max: float

    @property
    def ratios(self):
        r1 = self.S1_emp / self.S1_pred if self.S1_pred else float("nan")
        r2 = self.S2_emp / self.S2_pred if self.S2_pred else float("nan")
        return r1, r2

    def to_json(self):
        r1, r2 = self.ratios
        return {
            "params": self.params.to_json(),
            "S1_emp": self.S1_emp,
            "S1_pred": self.S1_pred,
            "S2_emp": self.S2_emp,
            "S2_pred": self.S2_pred,
            "ratios": {"S1": r1, "S2": r2},
            "ymax": self.y_max,
            "lambdamax": self.lambda_max,
            "fmax": self.f_max,
        }


def sieve_demo(params, F=None, workers=1, budget=None):
    """Build the weights from F (default 1 - P1), then compare empirical and predicted sums."""
    F = F or TestFunctionF.power(params.k, 1)
    ws = weights_from_F(params, F)
    s1, s2 = brute_force_sums(ws, workers, budget)
    p1, p2 = predicted_main_terms(params, F)
    return SieveReport(params, s1, p1, s2, p2, ws.y_max, ws.lambda_max, F.f_max)


# -- summation check ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SummationCheck:
    lhs: float
    rhs: float
    singular_series: float
    terms: int

    @property
    def ratio(self):
        if self.rhs == 0:
            return 1.0 if self.lhs == 0 else float("inf")
        return self.lhs / self.rhs


def _prime_norms(ring, bound):
    """Norms of all primes of norm <= bound, as (norm, multiplicity) pairs."""
    if ring.is_integers:
        return [(p, 1) for p in primes_below(int(bound) + 1)]
    out = []
    d = 1
    while ring.q**d <= bound:
        out.append((ring.q**d, count_irreducibles(ring.q, d)))
        d += 1
    return out


def ggpy_sum_check(ring, z, G=None, kappa=1, gamma=None, budget=None, euler_bound=10**6):
    """Direct sum of mu^2(d) g(d) G(log|d|/log z) over |d| < z against its main term.

    ``gamma`` maps a prime norm to gamma(p) (default 1), and g(p) = gamma/(|p| - gamma).
    The singular series is the Euler product over primes of norm <= ``euler_bound``.
    """
    if ring.is_quadratic:
        raise NotImplementedError("the summation check runs over Z and F_q[t]")
    if z <= 1:
        raise ValueError("z must exceed 1")
    G = G or (lambda x: 1.0)
    gamma = gamma or (lambda n: 1.0)
    check_budget(int(z), budget, f"squarefree moduli below {z}")
    logz = math.log(z)
    primes = primes_of_norm_at_most(ring, math.ceil(z) - 1)
    pn = [ring.q**p.degree if ring.is_poly else p for p in primes]
    pn.sort()
    gp = [gamma(n) / (n - gamma(n)) for n in pn]
    terms = []

    def rec(start, nrm, gv):
        terms.append(gv * G(math.log(nrm) / logz))
        for i in range(start, len(pn)):
            n2 = nrm * pn[i]
            if n2 >= z:
                break
            rec(i + 1, n2, gv * gp[i])

    rec(0, 1, 1.0)
    lhs = math.fsum(terms)
    S = 1.0
    for n, mult in _prime_norms(ring, euler_bound):
        S *= ((1 - 1 / n) ** kappa / (1 - gamma(n) / n)) ** mult
    cA = zeta_residue(ring)
    integral = integrate.quad(lambda x: G(x) * x ** (kappa - 1), 0, 1, limit=200)[0]
    rhs = S * cA**kappa * logz**kappa / math.gamma(kappa) * integral
    return SummationCheck(lhs, rhs, S, len(terms))


# -- level of distribution -----------------------------------------------------------------------

@dataclass(frozen=True)
class ModulusError:
    modulus: Poly
    max_error: float
    normalized: float


@dataclass(frozen=True)
class DistributionReport:
    q: int
    n: int
    max_degree: int
    primes: int
    records: tuple

    @property
    def max_normalized(self):
        return max((r.normalized for r in self.records), default=0.0)


def level_of_distribution(q, n, max_degree=3, budget=None):
    """max over coprime residues of |E(N; m, a)| for every monic m of degree 1..max_degree.

    E is the count of monic irreducibles of degree n in the class minus
    |P(N)|/phi(m); ``normalized`` divides by log(2|m|) * |A(N)|^(1/2).
    """
    digits = monic_digits(q, n, only_irreducible=True, budget=budget)
    total = len(digits)
    sqrtA = math.sqrt(q**n)
    records = []
    for deg in range(1, max_degree + 1):
        for mdig in monic_digits(q, deg, budget=budget):
            m = Poly.from_coeffs(q, tuple(int(c) for c in mdig) + (1,))
            rem = batch_rem(digits, q, m)
            idx = rem @ (q ** np.arange(deg, dtype=np.int64))
            counts = np.bincount(idx, minlength=q**deg)
            coprime = []
            phi = 0
            for r in range(q**deg):
                c = [(r // q**i) % q for i in range(deg)]
                if poly_gcd(Poly.from_coeffs(q, c), m).degree == 0:
                    coprime.append(r)
                    phi += 1
            expected = total / phi
            err = max(abs(counts[r] - expected) for r in coprime)
            records.append(ModulusError(m, float(err), float(err / (math.log(2 * q**deg) * sqrtA))))
    return DistributionReport(q, n, max_degree, total, tuple(records))
