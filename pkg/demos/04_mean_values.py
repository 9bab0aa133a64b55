"""
Mean values of Dirichlet polynomials
====================================

Mean squares over windows, the majorant inequality and the K/N sandwich.
"""

import numpy as np

from linnik_lab.analysis import (DirichletPolynomial, mean_square_window, montgomery_check, mvt_probe,
                                 taylor_log_deriv_KN)

P = DirichletPolynomial.from_mapping({1: 1.0, 2: -0.5, 3: 0.25j})
for T in (10, 100, 1000):
    v = mean_square_window(P, 1.2, 0, T)
    print(f"T = {T:5d}  mean of |P|^2 = {v / T:.6f}")
print("diagonal sum a_n^2 n^(-2.4) =", 1 + 0.25 * 2**-2.4 + 0.0625 * 3**-2.4)

# a polynomial with |a_n| <= b_n never beats three times the majorant
rng = np.random.default_rng(1)
n = np.arange(1, 31)
b = rng.uniform(0, 1, n.size)
A = DirichletPolynomial(n, b * np.exp(2j * np.pi * rng.uniform(size=n.size)))
B = DirichletPolynomial(n, b.astype(complex))
r = montgomery_check(A, B, 1.3, 5)
print(f"lhs {r.lhs:.4f}  3 int|B|^2 {r.rhs:.4f}  passed {r.passed}")

kn = taylor_log_deriv_KN(P, 1.5 + 2j, 6)
print(f"K = {kn.K:.4f}  N = {kn.N:.4f}  N/K = {kn.ratio:.3f}")

probe = mvt_probe(3, 1, 150, 1.1, 0, 1, N_trunc=10**5)
print(f"rough progression, T = 1: lhs {probe.lhs_truncated:.3e}  bound {probe.rhs_bound:.3e}")
