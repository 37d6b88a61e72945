"""Shared helpers: enumeration budgets, integer primes, deterministic JSON."""

import json
import math
import os

import numpy as np

BUDGET_ENV = "MTSIEVE_BUDGET"
_FALLBACK_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the caller-configured size cap."""


def default_budget():
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        return int(float(raw))
    return _FALLBACK_BUDGET


def check_budget(size, budget=None, what="enumeration"):
    cap = default_budget() if budget is None else budget
    if size > cap:
        raise BudgetExceeded(f"{what} of size {size} exceeds budget {cap}")


def is_prime_int(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_sieve(n):
    """Boolean array ``s`` of length ``n + 1`` with ``s[m]`` true iff m is prime."""
    s = np.ones(max(n + 1, 2), dtype=bool)
    s[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if s[p]:
            s[p * p :: p] = False
    return s[: n + 1]


def primes_below(n):
    """Rational primes strictly less than n."""
    if n <= 2:
        return []
    return [int(p) for p in np.flatnonzero(prime_sieve(n - 1))]


def factor_int(n):
    """Trial-division factorization of a positive integer as [(p, e), ...]."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def moebius_int(n):
    fs = factor_int(n)
    if any(e > 1 for _, e in fs):
        return 0
    return -1 if len(fs) % 2 else 1


def legendre(a, p):
    """Legendre symbol (a/p) for an odd prime p."""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def sqrt_mod(a, p):
    """Smallest square root of a modulo prime p, or None."""
    a %= p
    for r in range(p):
        if r * r % p == a:
            return r
    return None


# -- deterministic JSON -----------------------------------------------------

def _fmt_float(x):
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite float in report")
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def dumps(obj, indent=2):
    """Serialize to JSON with insertion key order and 17-significant-digit floats.

    Output is byte-identical for equal inputs, which the CLI relies on.
    """
    return _emit(obj, indent, 0)


def _emit(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return _quote(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_quote(str(k))}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, str, bool, np.integer, np.floating)) or v is None for v in obj):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _quote(s):

    return json.dumps(s, ensure_ascii=True)
