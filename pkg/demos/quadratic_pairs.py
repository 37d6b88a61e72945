"""Close pairs of prime elements in Z[sqrt 2].

Run: python demos/quadratic_pairs.py
"""

from mtsieve.quadratic import QuadInt, is_prime_element, prime_pair_search


def main():
    res = prime_pair_search(2, 600, 1000, cap=20)
    print(f"first {len(res.pairs)} pairs with both embeddings of a1 - a2 at most 600:")
    for a, b in res.pairs:
        print(f"  {a.x}{a.y:+d}sqrt2 and {b.x}{b.y:+d}sqrt2, norms {a.norm}, {b.norm}")
    a, b = QuadInt(2, 3, 1), QuadInt(2, 5, 1)
    print(f"\n3+sqrt2 prime: {is_prime_element(a)} (norm {a.norm}); 5+sqrt2 prime: {is_prime_element(b)} (norm {b.norm})")


if __name__ == "__main__":
    main()
