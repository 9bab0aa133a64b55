"""
Primes in progressions and rough numbers
========================================

psi(x; q, a) from the segmented sieve, then the count of y-rough integers
against the Mertens-product prediction.
"""

import math

import numpy as np

from linnik_lab.lemma_lab import verify_sifted_lemma
from linnik_lab.sieve import chebyshev_residues, mertens_product, rough_residues

x, q = 10**7, 7
psi = chebyshev_residues(x, q)
for a in range(1, q):
    print(f"psi({x}; {q}, {a}) = {psi[a]:.1f}   x/phi(q) = {x / (q - 1):.1f}")

# rough integers: no prime factor up to y
y = 20
counts = rough_residues(x, y, 3, 0)
print("20-rough integers up to 1e7 by class mod 3:", counts[1], counts[2])
print("prediction x * prod(1 - 1/p) / 2 =", round(x * mertens_product(y) / 2, 1))

# the same comparison through the lemma checker
r = verify_sifted_lemma("ap", 20**6, 20, 4, 3)
print(f"class 3 mod 4, x = 20^6: actual {r.actual:.0f}, main {r.main_term:.1f}, rel {r.rel_error:.2e}")
print("log-weighted version (j = 1):", f"{verify_sifted_lemma('ap', 10**6, 20, 3, 1, j=1).rel_error:.2e}")
print("prod(1 - 1/p) log y at y = 1000:", mertens_product(1000) * math.log(1000), " e^-gamma =", math.exp(-np.euler_gamma))
