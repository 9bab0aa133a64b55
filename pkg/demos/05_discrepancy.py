"""
Discrepancy functionals and the convolution identity
====================================================

Delta compares a sifted progression sum with its chi_0 and psi projections.
The log = Lambda * 1 identity ties the rough sums together exactly.
"""

from linnik_lab.linnik import DeltaInput, RoughTable, hybrid_identity_residual, recursion_residual, resolve_psi

q, y, x = 5, 400, 10**6
table = RoughTable(x, y, q)
psi = resolve_psi(q)
for b in range(1, q):
    print(f"b = {b}  Delta = {table.delta(x, b, psi):+10.3f}  Delta* = {table.delta_star(x, b, psi):+8.3f}")

r = hybrid_identity_residual(x, q, 2, y, table=table)
print(f"identity mod {q}: lhs {r.lhs:.6f}  relative residual {r.relative:.1e}")

rec = recursion_residual(x, q, 2, y, table=table)
print(f"recursion: {rec.neighbors} neighbour terms, normalised residual {rec.normalized:.3e}")
print("single value through the input record:", DeltaInput.resolve(x, y, q, 3))
