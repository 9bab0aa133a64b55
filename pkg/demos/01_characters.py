"""
Characters of (Z/qZ)*
=====================

Build the unit group, list its characters and check orthogonality.
"""

import numpy as np

from linnik_lab.residues import build_unit_group, enumerate_characters, real_nonprincipal

# (Z/24Z)* is a product of three groups of order 2
G = build_unit_group(24)
print("q = 24, phi =", G.phi, "component orders", G.orders, "generators", G.generators)

chars = enumerate_characters(G)
print(len(chars), "characters; real non-principal:", [c.label for c in real_nonprincipal(G)])

# each non-principal character sums to zero over a full period
n = np.arange(1, 25)
for chi in chars:
    print(f"{chi.label:10s} sum = {complex(np.sum(chi.values(n))).real:+.1e}")

# mod 7 the group is cyclic and one character has order 6
G7 = build_unit_group(7)
chi = enumerate_characters(G7)[1]
print("chi mod 7 on 1..6:", np.round(chi.values(np.arange(1, 7)), 6))
