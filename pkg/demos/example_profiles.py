"""Total cost along the 1/(b1 + b2 t) frequency profile and the Caldirola-Kanai oscillator.

The numeric solution of the auxiliary equation is fed through the cost
machinery and compared against the closed forms.
"""
import math

import numpy as np

from bicost.cost import (
    cost_function, example1_case1_lambda3_sq, example1_case1_total_cost, total_cost,
)
from bicost.ermakov import analytic_auxiliary, derived_functions, solve_auxiliary, solve_auxiliary_otf
from bicost.profiles import CaldirolaKanai, make_example1_profile
from bicost.specfun import default_cost_constants

k = default_cost_constants()
b1, b2 = 1.0, 1.0
lam3 = math.sqrt(example1_case1_lambda3_sq(k, b2))
print("W(t) = 1/(1 + t), starting on the self-similar solution")
for tf in (0.5, 1.0, 5.0):
    r0, v0, _ = analytic_auxiliary("example1case1", (0, tf), b1=b1, b2=b2).state(0.0)
    traj = solve_auxiliary_otf(make_example1_profile(b1, b2), float(r0), float(v0), (0.0, tf))
    df = derived_functions(traj)
    ct = total_cost(cost_function(df, k), (0.0, tf), n_samples=11, f_fn=df.f, lambda12=math.sqrt(k.lambda12_sq))
    ref = float(example1_case1_total_cost(lam3, b1, b2, tf))
    print(f"  t_f = {tf:3g}: C = {ct.total:.12f}  closed form = {ref:.12f}  bound = {ct.bound[-1]:.6f}")

print()
spec = CaldirolaKanai(1.0, 1.0, 0.5)
r0, v0, _ = analytic_auxiliary("ck", (0, 2), M=1.0, omega=1.0, Delta=0.5).state(0.0)
traj = solve_auxiliary(spec, float(r0), float(v0), (0.0, 2.0))
F2 = cost_function(derived_functions(traj), k)(np.linspace(0, 2, 9))
print("Caldirola-Kanai, M = w = 1, Delta = 0.5: F^2 on [0, 2]")
print("  ", np.array2string(F2, precision=12))
ref = 4 * (k.lambda12_sq / spec.omega0**2 - k.lambda2_sq)
print(f"   closed form {ref:.12f}")
