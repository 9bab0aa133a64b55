"""
L-values and the exceptional character
======================================

Dirichlet L-functions through Hurwitz zeta, the y-rough series and the
choice of the real character minimising L_q(1, chi).
"""

import math

from linnik_lab.lseries import dirichlet_l, find_exceptional, l_rough, l_rough_deriv, siegel_zero_scan
from linnik_lab.residues import build_unit_group, enumerate_characters, real_nonprincipal

chi4 = real_nonprincipal(build_unit_group(4))[0]
print("L(1, chi_4) =", dirichlet_l(1, chi4).real, " pi/4 =", math.pi / 4)

# removing primes up to y multiplies by the finite Euler product
chi5 = enumerate_characters(build_unit_group(5))[1]
for y in (1, 10, 100, 1000):
    print(f"y = {y:5d}  L_y(1.2+i, chi) = {l_rough(1.2 + 1j, chi5, y):.6f}")

d = l_rough_deriv(1.2 + 1j, chi5, 1000, 2)
print("second derivative at 1.2+i, y = 1000:", f"{d.value:.6f}", "circle radius", d.radius)

for q in (12, 23, 40, 163):
    rep = find_exceptional(q)
    print(f"q = {q:3d}  psi = {rep.psi.label:10s} L_q(1, psi) = {rep.value:.6f}")

s = siegel_zero_scan(163)
print("real zeros of L(s, psi) mod 163 in [0.85, 1):", s.zeros, " ratio", round(s.ratio, 4))
