"""Sieve weights over Z and F_3[t]: the lambda <-> y roundtrip and brute-force sums.

Run: python demos/sieve_weights.py
"""

from mtsieve import sieve as S
from mtsieve.ffpoly import Poly
from mtsieve.rings import RingDescriptor
from mtsieve.tuples import Tuple


def show(label, params):
    F = S.TestFunctionF.power(params.k, 1)
    ws = S.weights_from_F(params, F)
    back = S.invert_lambda_to_y(ws)
    err = max(abs(back[r] - ws.y[r]) for r in ws.y)
    rep = S.sieve_demo(params, F)
    print(f"{label}: {len(ws.lam)} weights, roundtrip error {err:.1e}")
    print(f"  S1 {rep.S1_emp:.1f} vs predicted {rep.S1_pred:.3f};  S2 {rep.S2_emp:.1f} vs predicted {rep.S2_pred:.3f}")


def main():
    print("predicted main terms are asymptotic in log R; at small R the brute-force sums run well above them\n")
    Z = RingDescriptor.integers()
    show("Z, (0, 2), N=10^5", S.SieveParams(Z, Tuple(Z, (0, 2)), 10**5, D0=5, R_override=40))
    F3 = RingDescriptor.poly(3)
    t = Tuple(F3, (Poly.from_coeffs(3, ()), Poly.from_coeffs(3, (0, 1))))
    show("F_3[t], (0, t), N=3^9", S.SieveParams(F3, t, 3**9, D0=3, R_override=81))


if __name__ == "__main__":
    main()
