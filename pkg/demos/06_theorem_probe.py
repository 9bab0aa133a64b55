"""
Primes in progressions against the exceptional-character main term
===================================================================

E(x; q, a) = psi(x; q, a) - x/phi(q) + psi(a) S(x, psi)/phi(q), measured
at desk scale, with a power-law fit of the error.
"""

from linnik_lab.linnik import exponent_fit, parameter_schedule, theorem_probe

for x in (10**5, 10**6, 10**7, 10**8):
    r = theorem_probe(x, 7, 3)
    print(f"x = {x:.0e}  psi = {r.psi_ap_value:.1f}  E = {r.E:+.2f}  normalised {r.normalized:.2e}")

fit = exponent_fit([10**5, 10**6, 10**7, 10**8], 7, 3)
print(f"|E| ~ x^{fit.slope:.3f}")

# the parameters the proof would use, for comparison
s = parameter_schedule(1e8, 7, y_override=16 * 49)
print(f"T = {s.T:.3e}  log y needed = {s.log_y_paper:.1f}  feasible at 1e8: {s.feasible}")
