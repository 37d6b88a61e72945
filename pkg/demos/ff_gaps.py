"""Gaps between monic irreducibles of equal degree over F_q.

Run: python demos/ff_gaps.py
"""

from mtsieve.ffgaps import check_Z, gap_census, monomial_census, proportion_bound, twist_gap
from mtsieve.ffpoly import Poly


def main():
    for q, n, d in [(3, 2, 1), (3, 2, 0), (3, 3, 0), (5, 3, 1)]:
        c = gap_census(q, n, d)
        print(f"q={q} n={n} d={d}: {c.occurring}/{c.total} degree-{d} polynomials are gaps")

    f1, f2 = Poly.from_coeffs(3, (1, 2, 0, 1)), Poly.from_coeffs(3, (2, 2, 0, 1))
    g1, g2 = twist_gap(f1, f2, 1)
    print(f"\n({f1.to_text()}) - ({f2.to_text()}) = {(f1 - f2).to_text()}; twisted: {(g1 - g2).to_text()}")

    m = monomial_census(107, 2, 0)
    print(f"q=107, n=2: {len(m.realized)} of 106 constants realized, orbit closed: {m.orbit_closed()}")

    print("\nZ(k, d, n) against the proportion bound 1/(k-1) - 1/(q-1):")
    for q, k, d, n in [(5, 2, 1, 3), (5, 3, 1, 3), (7, 4, 1, 3)]:
        z = check_Z(q, k, d, n)
        prop = gap_census(q, n, d).proportion
        print(f"  q={q} k={k} d={d} n={n}: holds={z.holds} proportion={prop} bound={proportion_bound(k, q)}")


if __name__ == "__main__":
    main()
