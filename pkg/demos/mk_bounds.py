"""Lower bounds for M_k from symmetric polynomials, checked by Monte Carlo.

Run: python demos/mk_bounds.py
"""

from fractions import Fraction

from mtsieve import mk


def main():
    print("k  D  lower bound         exact quotient > bound   MC (1e6 samples)")
    for k in (2, 3, 5, 10):
        for D in (1, 3, 5):
            r = mk.mk_lower_bound(k, D)
            mc = mk.rayleigh_monte_carlo(k, r.basis.generators, r.coefficient_vector, samples=10**6, seed=0)
            certified = Fraction(r.exact_quotient) >= Fraction(r.lower_bound)
            print(f"{k:<2} {D}  {r.lower_bound:.12f}  {str(certified):<24} {mc:.6f}")
    r = mk.mk_lower_bound(20)
    print(f"\nM_20 >= {r.lower_bound:.6f}; r_20 at level 1/2 is {mk.r_k(Fraction(1, 2), r.lower_bound)}")


if __name__ == "__main__":
    main()
