"""Acceptance checks, one per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines are repeated in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""
import math
import time
import timeit

import numpy as np
from scipy.linalg import expm

from bicost.cost import (
    cost_bound, cost_function, cost_squared_otf, cost_timeindep, example1_case1_lambda3_sq,
    example1_case1_total_cost, example1_case2_cost_squared, kz_time, total_cost,
)
from bicost.equivalence import mass_from_B1, verify_cost_equivalence
from bicost.ermakov import analytic_auxiliary, derived_functions, solve_auxiliary, solve_auxiliary_otf
from bicost.exceptions import DecompositionError
from bicost.profiles import (
    CaldirolaKanai, TimeIndepGeneralized, constant_profile, make_ck_coefficients, make_example1_profile,
)
from bicost.quench import (
    QuenchParams, count_touches, figure_data, quench_cost, quench_f, quench_rho, scaling_study, shannon_delta,
)
from bicost.specfun import default_cost_constants, hurwitz_zeta_nonpos
from bicost.su11 import (
    decompose_b_to_c, evolution_operator, hamiltonian_matrix, k_matrices, matrix_from_b, matrix_from_c,
    solve_classical, verify_schrodinger_residual,
)

RESULTS = {}
K = default_cost_constants()
R3 = math.sqrt(3.0)

BUILTIN = [
    ("constant", dict(omega=1.3), 5.0),
    ("example1case1", dict(b1=1.0, b2=1.0), 5.0),
    ("example1case2", dict(b1=1.0), 5.0),
    ("example2", dict(l1=1.0, l2=1.0), 5.0),
    ("quench", dict(delta=1.0, eta=1.0), 10.0),
    ("ck", dict(M=1.0, omega=1.0, Delta=0.5), 2.0),
]


def report(n, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}: {title}: {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def numeric_builtin(name, params, T):
    exact = analytic_auxiliary(name, (0.0, T), **params)
    r0, v0, _ = exact.state(0.0)
    return solve_auxiliary(exact.model, float(r0), float(v0), (0.0, T))


def test_c01_zeta_backbone():
    z1 = hurwitz_zeta_nonpos(-1, 0.5 - 1 / (2 * R3))
    z2 = hurwitz_zeta_nonpos(-1, 0.5 + 1 / (2 * R3))
    z3 = hurwitz_zeta_nonpos(-2, 0.5 + 1 / (2 * R3))
    l1 = default_cost_constants(1.0).lambda1_sq

    def work():
        hurwitz_zeta_nonpos(-1, 0.5 - 1 / (2 * R3))
        hurwitz_zeta_nonpos(-1, 0.5 + 1 / (2 * R3))
        hurwitz_zeta_nonpos(-2, 0.5 + 1 / (2 * R3))
        default_cost_constants(1.0)
    dt = min(timeit.repeat(work, number=100, repeat=5)) / 100
    ok = abs(z1) < 1e-12 and abs(z2) < 1e-12 and abs(z3 - R3 / 108) < 1e-12 \
        and abs(l1 - R3 / 432) < 1e-15 and round(l1, 7) == 0.0040094 and dt < 1e-3
    report(1, "zeta backbone", ok, f"zeta(-1,.)={z1:.1e},{z2:.1e} zeta(-2,.)-sqrt3/108={z3 - R3 / 108:.1e} "
           f"lambda1^2={l1:.7f} time={dt * 1e6:.1f}us")


def test_c02_constant_frequency():
    worst = 0.0
    for w in (0.5, 1.0, 2.5):
        df = derived_functions(analytic_auxiliary("constant", (0, 1), omega=w))
        F2 = cost_squared_otf(df, constant_profile(w), K, 0.3)
        ti = cost_timeindep(TimeIndepGeneralized(w * w, 1.0, 0.0), K).F2
        ref = K.lambda1_sq * (4 * w * w * 1.0 - 0.0)
        worst = max(worst, abs(F2 - ref) / ref, abs(ti - ref) / ref)
    report(2, "constant-frequency consistency", worst < 1e-12, f"max rel diff {worst:.1e}")


def test_c03_driven_regulator():
    worst = 0.0
    reg = 0.0
    for A0, B0, F0 in ((1.0, 1.0, 0.5), (2.0, 0.5, 3.0), (0.3, 4.0, 10.0)):
        base = cost_timeindep(TimeIndepGeneralized(A0, B0), K)
        d = cost_timeindep(TimeIndepGeneralized(A0, B0, force=F0), K)
        worst = max(worst, abs(d.F2 - base.F2) / base.F2)
        reg = max(reg, abs(d.force_regulator_sq - A0 * base.omega / R3))
    report(3, "driven-oscillator regulator", worst < 1e-12 and reg < 1e-12,
           f"rel diff {worst:.1e}, regulator err {reg:.1e}")


def test_c04_isotonic():
    vals = [cost_timeindep(TimeIndepGeneralized(1.0, 1.0, isotonic=D), K) for D in (0.1, 1.0, 10.0)]
    spread = max(abs(v.F2 - vals[0].F2) for v in vals) / vals[0].F2
    low = cost_timeindep(TimeIndepGeneralized(1.0, 1.0, isotonic=0.05), K)
    signs_ok = all(v.epsilon >= 1 / R3 and v.mean > 0 for v in vals) and low.epsilon < 1 / R3 and low.mean < 0
    report(4, "isotonic independence", spread < 1e-12 and signs_ok,
           f"spread {spread:.1e}, mean>0 for eps>=1/sqrt3, mean<0 at eps={low.epsilon:.3f}")


def test_c05_ermakov_invariant():
    rng = np.random.default_rng(2024)
    w = 1.7
    T = 10 * 2 * math.pi / w
    worst = 0.0
    for _ in range(5):
        traj = solve_auxiliary_otf(constant_profile(w), rng.uniform(0.3, 2.0), rng.uniform(-1, 1), (0, T))
        f = derived_functions(traj).f(np.linspace(0, T, 500))
        worst = max(worst, float(np.max(np.abs(f - f[0])) / f[0]))
    report(5, "Ermakov invariant", worst < 1e-8, f"max |f-f0|/f0 = {worst:.1e} over 10 periods")


def test_c06_identities():
    worst = 0.0
    for name, params, T in BUILTIN:
        df = derived_functions(numeric_builtin(name, params, T))
        t = np.linspace(0, T, 200)
        f3 = df.f3(t)
        g = df.g1(t) ** 2 + df.g2_mag(t) ** 2
        ref = f3 * f3 - 4 * df.A1(t) * df.B1(t)
        worst = max(worst, float(np.max(np.abs(g - ref) / (f3 * f3))),
                    float(np.max(np.abs(df.f1(t) * df.f2(t) - g) / (f3 * f3))))
    report(6, "pointwise identities", worst < 1e-8, f"max rel error {worst:.1e} over {len(BUILTIN)} profiles")


def test_c07_example1():
    b1, b2 = 1.0, 1.0
    lam3 = math.sqrt(example1_case1_lambda3_sq(K, b2))
    worst1 = 0.0
    for tf in (0.5, 1.0, 5.0):
        exact = analytic_auxiliary("example1case1", (0, tf), b1=b1, b2=b2)
        traj = solve_auxiliary_otf(make_example1_profile(b1, b2), *map(float, exact.state(0.0)[:2]), (0.0, tf))
        C = total_cost(cost_function(derived_functions(traj), K), (0, tf), n_samples=11).total
        ref = float(example1_case1_total_cost(lam3, b1, b2, tf))
        worst1 = max(worst1, abs(C - ref) / ref)
    exact = analytic_auxiliary("example1case2", (0, 5), b1=1.0)
    traj = solve_auxiliary_otf(make_example1_profile(1.0, 2.0), *map(float, exact.state(0.0)[:2]), (0.0, 5.0))
    t = np.linspace(0, 5, 200)
    F2 = cost_function(derived_functions(traj), K)(t)
    ref = example1_case2_cost_squared(K, 1.0, t)
    worst2 = float(np.max(np.abs(F2 - ref) / ref))
    report(7, "example 1 closed forms", worst1 < 1e-6 and worst2 < 1e-8,
           f"case 1 total cost rel err {worst1:.1e}, case 2 F^2 rel err {worst2:.1e}")


def test_c08_caldirola_kanai():
    M, w, D = 1.0, 1.0, 0.5
    spec = CaldirolaKanai(M, w, D)
    exact = analytic_auxiliary("ck", (0, 2), M=M, omega=w, Delta=D)
    traj = solve_auxiliary(spec, *map(float, exact.state(0.0)[:2]), (0.0, 2.0))
    F2 = cost_function(derived_functions(traj), K)(np.linspace(0, 2, 201))
    var = float(np.ptp(F2) / np.mean(F2))
    ref = 4 * w * w * (K.lambda12_sq * w * w / spec.omega0**2 - K.lambda2_sq)
    err = float(np.max(np.abs(F2 - ref)) / ref)
    report(8, "Caldirola-Kanai constant cost", var < 1e-10 and err < 1e-10,
           f"time variance {var:.1e}, closed-form rel err {err:.1e}")


def test_c09_su11():
    start = time.perf_counter()
    K0, KP, KM = k_matrices()
    rng = np.random.default_rng(99)
    worst = 0.0
    kinds = {"generic": 0, "near-zero chi": 0, "imaginary chi": 0}
    for i in range(100):
        if i % 3 == 0:
            b, kind = rng.normal(size=3) + 1j * rng.normal(size=3), "generic"
        elif i % 3 == 1:
            b, kind = (rng.normal(size=3) + 1j * rng.normal(size=3)) * 1e-6, "near-zero chi"
        else:
            b, kind = np.array([rng.normal(), abs(rng.normal()) + 0.1, abs(rng.normal()) + 0.1]), "imaginary chi"
        ref = expm(b[0] * K0 + b[1] * KP + b[2] * KM)
        scale = max(1.0, float(np.abs(ref).max()))
        worst = max(worst, float(np.max(np.abs(matrix_from_b(b) - ref))) / scale)
        try:
            c = decompose_b_to_c(b)
        except DecompositionError:
            continue
        worst = max(worst, float(np.max(np.abs(matrix_from_c(c) - ref))) / scale)
        kinds[kind] += 1
    one = constant_profile(1.0)
    xc = solve_classical(one, one, 1.4)
    r1 = verify_schrodinger_residual(lambda t: evolution_operator(xc, t),
                                     lambda t: hamiltonian_matrix(one, one, t), np.linspace(0.05, 1.3, 26))
    _, B1 = make_ck_coefficients(1.0, 1.0, 0.6)
    m1 = mass_from_B1(B1)
    xc = solve_classical(m1, one, 1.4)
    r2 = verify_schrodinger_residual(lambda t: evolution_operator(xc, t),
                                     lambda t: hamiltonian_matrix(m1, one, t), np.linspace(0.05, 1.3, 26))
    dt = time.perf_counter() - start
    ok = worst < 1e-10 and r1 < 1e-6 and r2 < 1e-6 and dt < 1.0 and min(kinds.values()) > 0
    report(9, "SU(1,1) decomposition and evolution", ok,
           f"matrix err {worst:.1e}, residual HO {r1:.1e} CK {r2:.1e}, {dt:.2f}s")


def test_c10_equivalence():
    gaps, f3 = [], []
    for T in (0.5, 1.0):
        rep = verify_cost_equivalence(CaldirolaKanai(1.0, 1.0, 0.5), T, K)
        gaps.append(rep.gap)
        f3.append(rep.f3_error)
    report(10, "cost equivalence", max(gaps) < 1e-6 and max(f3) < 1e-6,
           f"max gap {max(gaps):.1e}, f3 mapping err {max(f3):.1e}")


def test_c11_bound():
    worst_margin = math.inf
    for name, params, Tmax in BUILTIN:
        df = derived_functions(analytic_auxiliary(name, (0, Tmax), **params))
        Ts = np.linspace(0, Tmax, 21)[1:]
        ct = total_cost(cost_function(df, K), (0, Tmax), n_samples=21)
        for T, C in zip(Ts, ct.cumulative[1:]):
            B = cost_bound(df.f3, K, T)
            worst_margin = min(worst_margin, (B - C) / B)
        assert cost_bound(df.f3, K, 0.0) == 0.0
    report(11, "Cauchy-Schwarz bound", worst_margin > 0,
           f"smallest relative slack {worst_margin:.2e} over {len(BUILTIN)} profiles x 20 T")


def test_c12_quench():
    worst_ep = 0.0
    for beta in (0.1, 1.0, 5.0):
        p = QuenchParams.from_beta(beta, 1.3)
        s = np.linspace(0.01, 30, 300)
        h = 1e-3
        rho, _ = quench_rho(p, s)
        v = [quench_rho(p, s + j * h)[1] for j in (-2, -1, 1, 2)]
        rdd = (v[0] - 8 * v[1] + 8 * v[2] - v[3]) / (12 * h * p.eta)
        w = p.delta / (p.eta**2 * (1 + s * s))
        worst_ep = max(worst_ep, float(np.max(np.abs(rdd + w * w * rho - rho**-3) / rho**-3)))
    p = QuenchParams(0.8, 1.3)
    f0 = abs(quench_f(p, 0.0) - 2 * p.omega0) / (2 * p.omega0)
    c0 = abs(quench_cost(p, K, 0.0) - 4 * K.lambda1_sq * p.beta**2) / (4 * K.lambda1_sq * p.beta**2)
    dS0 = shannon_delta(p, 0.0)
    kz = max(abs(kz_time(QuenchParams(d, 1.0).spec().reduced().omega) - d / 2) for d in (0.5, 1.0, 2.0))
    ok = worst_ep < 1e-8 and f0 < 1e-12 and c0 < 1e-10 and dS0 == 0.0 and kz < 1e-10
    report(12, "quench closed forms", ok,
           f"EP residual {worst_ep:.1e}, f(0) {f0:.1e}, F_N^2(0) {c0:.1e}, dS(0)={dS0}, t_KZ err {kz:.1e}")


def test_c13_quench_scaling():
    k = default_cost_constants(1.0, 0.05)
    start = time.perf_counter()
    figs = {name: figure_data(name, k) for name in ("fig1", "fig2", "fig3", "fig4")}
    dt = time.perf_counter() - start
    study = scaling_study(k, 200.0)
    expo = study.power.params["exponent"]
    amp = study.power.params["amplitude"]
    slope = study.linear.params["slope"]
    f1 = figs["fig1"].data
    touches = [count_touches(f1[:, j] - f1[:, j + 1]) for j in (1, 3, 5)]
    f3 = figs["fig3"].data
    m = f3[:, 0] < 1
    growth = all(np.all(np.diff(f3[m, j]) > 0) for j in (1, 2, 3))
    plateau = float(np.max(np.abs(f3[m, 2] - f3[m, 3]) / f3[m, 3]))
    ok = (1.9 <= expo <= 2.1 and abs(amp * 18 - 1) <= 0.2 and abs(slope / 0.0345 - 1) <= 0.2
          and touches[-1] >= 3 and touches == sorted(touches) and growth and plateau < 0.05 and dt < 30)
    report(13, "quench scaling and figures", ok,
           f"exponent {expo:.4f}, amplitude {amp:.4f} (1/18={1 / 18:.4f}), slope {slope:.4f}, "
           f"touches {touches}, growth {growth}, s=20 vs 200 gap {plateau:.1e}, figures {dt:.2f}s")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_c") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    raise SystemExit(1 if failed else 0)
