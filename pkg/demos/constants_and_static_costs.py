"""Regularization constants and the cost of constant Hamiltonians.

Prints the zeta roots that fix the subtracted mean, the resulting lambda1^2,
and the cost of a few time-independent oscillators, including a driven and
an isotonic one.
"""
import math

from bicost.cost import cost_timeindep, geodesic_cost
from bicost.profiles import TimeIndepGeneralized
from bicost.specfun import default_cost_constants, hurwitz_zeta_nonpos, solve_mean_ratio

k = default_cost_constants()
gp, gm = solve_mean_ratio()
print(f"mean ratio roots gamma = {gp:+.15f}, {gm:+.15f}")
r = 1 / (2 * math.sqrt(3))
print(f"zeta(-2, 1/2 + 1/(2 sqrt 3)) = {hurwitz_zeta_nonpos(-2, 0.5 + r):.15f}  (sqrt3/108 = {math.sqrt(3) / 108:.15f})")
print(f"lambda1^2 = {k.lambda1_sq:.10f}, lambda2^2 = {k.lambda2_sq}")
print()

for label, spec in [
    ("harmonic w=2", TimeIndepGeneralized(4.0, 1.0)),
    ("squeezed (A0, B0, C0) = (2, 0.7, 0.9)", TimeIndepGeneralized(2.0, 0.7, 0.9)),
    ("driven w=2, F0=3", TimeIndepGeneralized(4.0, 1.0, force=3.0)),
    ("isotonic D0=0.05", TimeIndepGeneralized(1.0, 1.0, isotonic=0.05)),
    ("isotonic D0=10", TimeIndepGeneralized(1.0, 1.0, isotonic=10.0)),
]:
    c = cost_timeindep(spec, k)
    print(f"{label:40s} F^2 = {c.F2:.8f}  complexity = {c.complexity:.6f}  mean = {c.mean:+.6f}")

print()
print("geodesic from exp(b.K) with b = (0, -w^2, -1), w = 2:", geodesic_cost((0.0, -4.0, -1.0), k).F2)
