"""Time reparametrization between a mass-and-frequency oscillator and a unit-mass one,
and the SU(1,1) evolution operator of the damped oscillator.
"""
import numpy as np

from bicost.equivalence import mass_from_B1, verify_cost_equivalence
from bicost.profiles import CaldirolaKanai, constant_profile, make_ck_coefficients
from bicost.specfun import default_cost_constants
from bicost.su11 import (
    decompose_b_to_c, evolution_operator, hamiltonian_matrix, matrix_from_b, matrix_from_c, solve_classical,
    verify_schrodinger_residual,
)

k = default_cost_constants()
for T in (0.5, 1.0, 2.0):
    rep = verify_cost_equivalence(CaldirolaKanai(1.0, 1.0, 0.5), T, k)
    print(f"T = {T}: D = {rep.D_otmf:.12f} vs {rep.D_otf:.12f} (gap {rep.gap:.1e}); "
          f"the F^2 curves differ by up to {rep.norm_separation:.3e}")

print()
b = (0.3 + 0.2j, -1.1, 0.4j)
c = decompose_b_to_c(b)
print("b =", b)
print("c = (" + ", ".join(f"{v:.6f}" for v in c) + ")")
print("max |exp(b.K) - normal ordered product| =", np.max(np.abs(matrix_from_b(b) - matrix_from_c(c))))

_, B1 = make_ck_coefficients(1.0, 1.0, 0.6)
m1 = mass_from_B1(B1)
one = constant_profile(1.0)
xc = solve_classical(m1, one, 1.4)
r = verify_schrodinger_residual(lambda t: evolution_operator(xc, t), lambda t: hamiltonian_matrix(m1, one, t),
                                np.linspace(0.05, 1.3, 26))
print(f"Schrodinger residual of the damped-oscillator evolution on [0.05, 1.3]: {r:.2e}")
