"""Command-line entry point: ``mtsieve <command> ...``.

Every command prints exactly one report on standard output.  Exit status is
0 on success, 2 when a precondition fails, 3 when an enumeration budget is
exhausted and 1 on any other error.
"""

import argparse
import csv
import io
import sys
from fractions import Fraction

from . import __version__
from . import ffgaps, mk, sieve
from . import quadratic as qf
from ._util import BudgetExceeded, default_budget, dumps
from .engelsma import TupleFileError, load_and_verify, verify_shipped
from .ffpoly import Poly, count_irreducibles, enumerate_monic, is_irreducible
from .rings import RingDescriptor
from .tuples import (
    SearchBudgetExhausted,
    diameter,
    find_narrow_tuple,
    is_admissible,
    lift_admissible_check,
    parse_tuple,
)

EXIT_OK, EXIT_INTERNAL, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3


class PreconditionError(ValueError):
    pass


def _require(cond, msg):
    if not cond:
        raise PreconditionError(msg)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


# -- tuples ---------------------------------------------------------------------------

def cmd_tuples_check(args):
    ring = RingDescriptor.parse(args.ring)
    t = parse_tuple(ring, args.tuple)
    rep = is_admissible(t)
    out = {"admissible": rep.admissible, "ring": ring.label, "k": t.k}
    if not rep.admissible:
        j = rep.to_json(ring)
        out["witness"] = j["witness"]
        out["covered"] = j["covered"]
    out["primes_checked"] = len(rep.primes_checked)
    return out


def cmd_tuples_find(args):
    ring = RingDescriptor.parse(args.ring)
    _require(args.k >= 2, "k must be at least 2")
    t = find_narrow_tuple(ring, args.k, args.search_budget, args.max_degree, args.threads)
    out = {"ring": ring.label, "k": t.k, "elements": t.to_json(), "admissible": is_admissible(t).admissible}
    if ring.is_integers:
        out["diameter"] = diameter(t)
    else:
        out["max_degree"] = max(h.degree for h in t.elements)
    return out


def cmd_tuples_lift(args):
    Z = RingDescriptor.integers()
    target = RingDescriptor.parse(args.field)
    _require(target.is_quadratic, "--field must name a real quadratic ring, e.g. sqrt:2")
    t = parse_tuple(Z, args.tuple)
    _require(is_admissible(t).admissible, "the tuple is not admissible over Z")
    rep = lift_admissible_check(t, target)
    return {"field": target.label, "k": t.k, "admissible_over_Z": True, "admissible_in_field": rep.admissible,
            "prime_ideals_checked": len(rep.primes_checked)}


def cmd_tuples_verify(args):
    if args.path:
        rec = load_and_verify(args.path, args.expect_diameter)
    else:
        rec = verify_shipped()
        if rec is None:
            return {"status": "data missing", "verified": False}
    out = {"status": "verified" if rec.verified else "failed"}
    out.update(rec.to_json())
    return out


# -- irreducibles ------------------------------------------------------------------------

def cmd_irr_count(args):
    _require(args.n >= 1, "degree must be at least 1")
    out = {"q": args.q, "n": args.n, "count": count_irreducibles(args.q, args.n)}
    if args.enumerate:
        out["enumerated"] = sum(1 for _ in enumerate_monic(args.q, args.n, True, args.budget))
    return out


def cmd_irr_list(args):
    polys = [f.to_json() for f in enumerate_monic(args.q, args.n, True, args.budget)]
    if args.format == "csv":
        return _csv(["poly"], [[",".join(map(str, p))] for p in polys])
    return {"q": args.q, "n": args.n, "count": len(polys), "polys": polys}


def cmd_irr_test(args):
    f = Poly.parse(args.q, args.poly)
    _require(not f.is_zero(), "the zero polynomial has no irreducibility status")
    return {"q": args.q, "poly": f.to_json(), "degree": f.degree, "irreducible": is_irreducible(f)}


# -- sieve ------------------------------------------------------------------------------

def cmd_sieve_demo(args):
    ring = RingDescriptor.parse(args.ring)
    _require(not ring.is_quadratic, "sieve-demo runs over Z and F_q[t]")
    t = parse_tuple(ring, args.tuple)
    params = sieve.SieveParams(ring, t, args.N, args.theta, args.delta, args.D0, args.R)
    F = sieve.TestFunctionF.power(t.k, args.F_power)
    report = sieve.sieve_demo(params, F, args.threads, args.budget)
    return report.to_json()


def cmd_ggpy(args):
    ring = RingDescriptor.parse(args.ring)
    _require(not ring.is_quadratic, "ggpy-check runs over Z and F_q[t]")
    G = _G_FAMILY[args.G]
    c = sieve.ggpy_sum_check(ring, args.z, G=G, budget=args.budget)
    return {"ring": ring.label, "z": args.z, "G": args.G, "lhs": c.lhs, "rhs": c.rhs, "ratio": c.ratio,
            "singular_series": c.singular_series, "terms": c.terms}


_G_FAMILY = {
    "one": lambda x: 1.0,
    "zero": lambda x: 0.0,
    "x": lambda x: x,
    "one-minus-x": lambda x: 1.0 - x,
}


def cmd_lod(args):
    rep = sieve.level_of_distribution(args.q, args.n, args.max_degree, args.budget)
    return {
        "q": rep.q,
        "n": rep.n,
        "max_degree": rep.max_degree,
        "primes": rep.primes,
        "max_normalized": rep.max_normalized,
        "moduli": [{"modulus": r.modulus.to_json(), "max_error": r.max_error, "normalized": r.normalized}
                   for r in rep.records],
    }


# -- M_k ------------------------------------------------------------------------------------

THETA_PRESETS = [("1/2", Fraction(1, 2))] + [
    (f"1/({r2}+5/2)", 1 / (r2 + Fraction(5, 2))) for r2 in range(4)
]


def cmd_mk(args):
    _require(args.k >= 1, "k must be at least 1")
    deg = args.degree if args.degree is not None else mk.default_degree(args.k)
    _require(deg >= 0, "degree bound must be nonnegative")
    res = mk.mk_lower_bound(args.k, deg, prune_dependent=not args.strict, workers=args.threads)
    lb = Fraction(res.lower_bound)
    return {
        "k": res.k,
        "degree_bound": res.degree_bound,
        "lower_bound": res.lower_bound,
        "r_k": {name: mk.r_k(th, lb) for name, th in THETA_PRESETS},
        "residual": res.residual,
        "basis_size": len(res.basis),
        "generators": [list(g) for g in res.basis.generators],
        "coefficients": list(res.coefficient_vector),
        "exact_quotient": f"{res.exact_quotient.numerator}/{res.exact_quotient.denominator}",
    }


# -- function-field gaps -------------------------------------------------------------------------

def cmd_census(args):
    c = ffgaps.gap_census(args.q, args.n, args.d, args.threads, args.budget)
    if args.format == "csv":
        return _csv(["gap_poly", "count"], c.rows())
    return {"q": c.q, "n": c.n, "d": c.d, "total": c.total, "occurring": c.occurring,
            "proportion": float(c.proportion), "gaps": [{"gap_poly": g, "count": n} for g, n in c.rows()]}


def cmd_monomials(args):
    m = ffgaps.monomial_census(args.q, args.n, args.d, args.threads, args.budget)
    if args.format == "csv":
        return _csv(["gap_poly", "count"], m.census.rows())
    return {"q": args.q, "n": args.n, "d": args.d, "realized": list(m.realized),
            "gcd_condition": m.gcd_condition, "all_monomials": m.all_monomials,
            "orbit_subgroup": m.orbit_subgroup, "orbit_closed": m.orbit_closed(),
            "gaps": [{"gap_poly": g, "count": n} for g, n in m.census.rows()]}


def cmd_twist(args):
    f1, f2 = Poly.parse(args.q, args.f1), Poly.parse(args.q, args.f2)
    g1, g2 = ffgaps.twist_gap(f1, f2, args.a)
    diff = g1 - g2
    return {"q": args.q, "g1": g1.to_json(), "g2": g2.to_json(), "difference": diff.to_json(),
            "irreducible": [is_irreducible(g1), is_irreducible(g2)]}


def cmd_zcheck(args):
    return ffgaps.check_Z(args.q, args.k, args.d, args.n, args.budget, args.threads).to_json()


def cmd_bound(args):
    b = ffgaps.proportion_bound(args.k0, args.q)
    return {"k0": args.k0, "q": args.q, "bound": f"{b.numerator}/{b.denominator}", "value": float(b)}


# -- real quadratic ------------------------------------------------------------------------------

def cmd_nf_pairs(args):
    ring = RingDescriptor.parse(args.field)
    _require(ring.is_quadratic, "--field must name a real quadratic ring, e.g. sqrt:2")
    res = qf.prime_pair_search(ring.d, args.bound, args.box, args.cap, args.budget)
    return {
        "field": ring.label,
        "bound": args.bound,
        "box": args.box,
        "truncated": res.truncated,
        "primes_scanned": res.primes_scanned,
        "pairs": [{"a1": [a.x, a.y], "a2": [b.x, b.y], "norms": [a.norm, b.norm]} for a, b in res.pairs],
    }


def cmd_nf_prime(args):
    ring = RingDescriptor.parse(args.field)
    _require(ring.is_quadratic, "--field must name a real quadratic ring, e.g. sqrt:2")
    a = ring.element((args.x, args.y))
    _require(a.norm != 0 and not a.is_unit(), "zero and units are neither prime nor composite")
    return {"field": ring.label, "element": [a.x, a.y], "norm": a.norm, "prime": qf.is_prime_element(a)}


# -- parser ------------------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker cap; results do not depend on it")
    common.add_argument("--format", choices=["json", "csv"], default=None, help="report format")
    common.add_argument("--budget", type=int, default=None,
                        help=f"enumeration size cap (default from MTSIEVE_BUDGET, else {default_budget()})")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized harnesses")

    p = argparse.ArgumentParser(prog="mtsieve", description="Maynard-Tao sieve laboratory over Z, F_q[t] and real quadratic rings.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(parent, name, func, help_text, schema):
        sp = parent.add_parser(name, parents=[common], help=help_text, description=help_text)
        sp.set_defaults(func=func, schema=schema)
        return sp

    tp = sub.add_parser("tuples", help="admissible k-tuples").add_subparsers(dest="sub", required=True)
    s = add(tp, "check", cmd_tuples_check,
            "Admissibility: the tuple misses a residue class modulo every prime of norm at most k.", "tuples-check")
    s.add_argument("tuple", help='"0,2,6" over Z, "1,0,1;2,1" over F_q[t], "x,y;x,y" in O_K, or @file.json')
    s.add_argument("--ring", default="Z")
    s = add(tp, "find", cmd_tuples_find,
            "Narrow admissible tuple by greedy residue sieving (small diameter over Z, low degree over F_q[t]).",
            "tuples-find")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--ring", default="Z")
    s.add_argument("--search-budget", type=int, default=2000)
    s.add_argument("--max-degree", type=int, default=None)
    s = add(tp, "lift", cmd_tuples_lift,
            "An admissible tuple of rational integers stays admissible in a real quadratic ring.", "tuples-lift")
    s.add_argument("tuple")
    s.add_argument("--field", required=True)
    s = add(tp, "verify-engelsma", cmd_tuples_verify,
            "Verify the bundled admissible 105-tuple of diameter 600, or a given tuple file.",
            "tuples-verify-engelsma")
    s.add_argument("--path", default=None)
    s.add_argument("--expect-diameter", type=int, default=None)

    ip = sub.add_parser("irr", help="irreducible polynomials over F_q").add_subparsers(dest="sub", required=True)
    s = add(ip, "count", cmd_irr_count, "Number of monic irreducibles of degree n by the necklace formula.", "irr-count")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--enumerate", action="store_true", help="also count by enumeration")
    s = add(ip, "list", cmd_irr_list, "Monic irreducibles of degree n in lexicographic coefficient order.", "irr-list")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s = add(ip, "test", cmd_irr_test, "Distinct-degree irreducibility test.", "irr-test")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("poly", help='ascending coefficients, e.g. "1,0,1" for t^2 + 1')

    s = add(sub, "sieve-demo", cmd_sieve_demo,
            "Build sieve weights from F = (1 - x_1 - ... - x_k)^a and compare brute-force S1, S2 "
            "with their predicted main terms.", "sieve-demo")
    s.add_argument("--ring", default="Z")
    s.add_argument("--tuple", default="0,2")
    s.add_argument("--N", type=int, required=True, help="box size (a power of q over F_q[t])")
    s.add_argument("--theta", type=float, default=0.5)
    s.add_argument("--delta", type=float, default=0.05)
    s.add_argument("--D0", type=float, default=7)
    s.add_argument("--R", type=float, default=None, help="override R = |A(N)|^(theta/2 - delta)")
    s.add_argument("--F-power", dest="F_power", type=int, default=1)

    s = add(sub, "ggpy-check", cmd_ggpy,
            "Summation asymptotic: sum of mu^2(d) G(log|d|/log z)/phi(d) over |d| < z versus c_A log z times "
            "the integral of G.", "ggpy-check")
    s.add_argument("--ring", default="Z")
    s.add_argument("--z", type=int, required=True)
    s.add_argument("--G", choices=sorted(_G_FAMILY), default="one")

    s = add(sub, "lod-measure", cmd_lod,
            "Pointwise error of irreducibles in residue classes over F_q[t], normalized by "
            "log(2|m|) |A(N)|^(1/2).", "lod-measure")
    s.add_argument("--q", type=int, default=3)
    s.add_argument("--n", type=int, default=10)
    s.add_argument("--max-degree", type=int, default=3)

    s = add(sub, "mk", cmd_mk,
            "Certified lower bound for M_k from symmetric polynomials (1 - P1)^a P2^b, and "
            "r_k = ceil(theta M_k / 2) at levels 1/2 and 1/(r2 + 5/2).", "mk")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--degree", type=int, default=None, help="max a + 2b (default 11 for k > 20, else 7)")
    s.add_argument("--strict", action="store_true", help="fail instead of dropping linearly dependent generators")

    gp = sub.add_parser("ff-gaps", help="gaps between monic irreducibles").add_subparsers(dest="sub", required=True)
    s = add(gp, "census", cmd_census, "Ordered-pair counts of degree-d gaps between monic irreducibles of degree n.",
            "ff-gaps-census")
    for a in ("q", "n", "d"):
        s.add_argument(f"--{a}", type=int, required=True)
    s = add(gp, "monomials", cmd_monomials,
            "Monomial gaps a t^d in degree n and their closure under the twist f(t) -> f(w t)/w^n.",
            "ff-gaps-monomials")
    for a in ("q", "n", "d"):
        s.add_argument(f"--{a}", type=int, required=True)
    s = add(gp, "twist", cmd_twist, "Turn the monomial gap f1 - f2 = c t^d into a t^d when gcd(n - d, q - 1) = 1.",
            "ff-gaps-twist")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--f1", required=True)
    s.add_argument("--f2", required=True)
    s.add_argument("--a", type=int, required=True)
    s = add(gp, "zcheck", cmd_zcheck,
            "Exhaustive check that every admissible k-tuple with elements and differences of degree d has a "
            "degree-n translate pair of monic irreducibles.", "ff-gaps-zcheck")
    for a in ("q", "k", "d", "n"):
        s.add_argument(f"--{a}", type=int, required=True)
    s = add(gp, "bound", cmd_bound, "Gap proportion lower bound 1/(k0 - 1) - 1/(q - 1).", "ff-gaps-bound")
    s.add_argument("--k0", type=int, default=105)
    s.add_argument("--q", type=int, required=True)

    np_ = sub.add_parser("nf", help="real quadratic rings").add_subparsers(dest="sub", required=True)
    s = add(np_, "pairs", cmd_nf_pairs,
            "Pairs of prime elements in A_0(box) whose difference is at most the bound at both real embeddings.",
            "nf-pairs")
    s.add_argument("--field", default="sqrt:2")
    s.add_argument("--bound", type=int, default=600)
    s.add_argument("--box", type=int, default=1000)
    s.add_argument("--cap", type=int, default=1000)
    s = add(np_, "prime-test", cmd_nf_prime, "Whether x + y*omega generates a prime ideal.", "nf-prime-test")
    s.add_argument("--field", default="sqrt:2")
    s.add_argument("x", type=int)
    s.add_argument("y", type=int)
    return p


def run(argv=None, stdout=None):
    """Parse, dispatch and print one report; returns the exit status."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PRECONDITION
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_PRECONDITION
    if args.format is None:
        args.format = "csv" if args.schema in ("ff-gaps-census",) else "json"
    try:
        out = args.func(args)
    except (BudgetExceeded, SearchBudgetExhausted) as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, TupleFileError, NotImplementedError, ZeroDivisionError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if isinstance(out, str):
        stdout.write(out + "\n")
    elif args.format == "csv":
        print("error: this command has no CSV form", file=sys.stderr)
        return EXIT_PRECONDITION
    else:
        stdout.write(dumps(out) + "\n")
    return EXIT_OK


def main():
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # reader closed early (e.g. piped into head); silence the flush at exit
        sys.stdout = io.TextIOWrapper(io.BytesIO())
        code = EXIT_OK
    sys.exit(code)
