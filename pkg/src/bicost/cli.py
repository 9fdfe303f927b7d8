"""Command-line front end.

Subcommands: ``cost``, ``quench``, ``equiv``, ``su11-check``, ``zeta`` and
``timeindep``. Settings come from flags and, optionally, a flat ``key = value``
config file (``--config``). Flags win over the file. Recognised keys::

    profile                      family name
    profile.<param>              b1 b2 l1 l2 delta eta M omega Delta A0 B0 C0 F0 D0
    tol  t_max  steps  lambda0  lambda2_sq  out  format  rho0  rho_dot0
    quench.beta  quench.s_max  quench.mode  quench.figure
    su11.samples  su11.seed

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .cost import cost_function, cost_timeindep, total_cost, write_cost_csv
from .equivalence import verify_cost_equivalence
from .ermakov import analytic_auxiliary, derived_functions, ground_state_initial, solve_auxiliary
from .exceptions import BicostError
from .profiles import OTF, OTMF, TimeIndepGeneralized, spec_from_params
from .quench import QuenchParams, figure_data, quench_cost, quench_f, shannon_delta
from .specfun import default_cost_constants, hurwitz_zeta_nonpos, solve_mean_ratio
from .svg import emit_svg

EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 2, 3, 4

PROFILE_PARAMS = ("b1", "b2", "l1", "l2", "delta", "eta", "M", "omega", "Delta", "A0", "B0", "C0", "F0", "D0")
TOP_KEYS = {"profile", "tol", "t_max", "steps", "lambda0", "lambda2_sq", "out", "format", "rho0", "rho_dot0"}
SECTION_KEYS = {"quench": {"beta", "s_max", "mode", "figure"}, "su11": {"samples", "seed"}}
_ANALYTIC_FOR = {"constant": "constant", "example1case1": "example1case1", "example1case2": "example1case2",
                 "example2": "example2", "quench": "quench", "ck": "ck"}


class ConfigError(Exception):
    pass


def parse_config_text(text: str) -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment. Unknown keys are rejected."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, val = (p.strip() for p in line.split("=", 1))
        if "." in key:
            sec, sub = key.split(".", 1)
            ok = (sec == "profile" and sub in PROFILE_PARAMS) or sub in SECTION_KEYS.get(sec, ())
        else:
            ok = key in TOP_KEYS
        if not ok:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = val
    return out


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--profile", help="profile family")
    for p in PROFILE_PARAMS:
        common.add_argument(f"--{p}", dest=f"profile.{p}", type=float)
    common.add_argument("--tol", type=float)
    common.add_argument("--t-max", dest="t_max", type=float)
    common.add_argument("--steps", type=int)
    common.add_argument("--lambda0", type=float)
    common.add_argument("--lambda2-sq", dest="lambda2_sq", type=float)
    common.add_argument("--rho0", type=float)
    common.add_argument("--rho-dot0", dest="rho_dot0", type=float)
    common.add_argument("--out", help="output path (CSV); stdout when omitted")
    common.add_argument("--format", choices=("csv", "svg", "both"))

    ap = argparse.ArgumentParser(prog="bicost", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"bicost {__version__}")
    sub = ap.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("cost", parents=[common], help="cost and total cost along a time-dependent profile")
    q = sub.add_parser("quench", parents=[common], help="quench protocol series and figure data")
    q.add_argument("--beta", dest="quench.beta", type=float)
    q.add_argument("--s-max", dest="quench.s_max", type=float)
    q.add_argument("--mode", dest="quench.mode", choices=("exact", "adiabatic", "late_time"))
    q.add_argument("--figure", dest="quench.figure", type=int, choices=(1, 2, 3, 4))
    sub.add_parser("equiv", parents=[common], help="cost equivalence under the time reparametrization")
    s = sub.add_parser("su11-check", parents=[common], help="SU(1,1) decomposition and Schrodinger residuals")
    s.add_argument("--samples", dest="su11.samples", type=int)
    s.add_argument("--seed", dest="su11.seed", type=int)
    sub.add_parser("zeta", parents=[common], help="regularization roots and cost constants")
    sub.add_parser("timeindep", parents=[common], help="cost of a constant generalized oscillator")
    return ap


def _merge(ns: argparse.Namespace) -> dict:
    cfg = {}
    if ns.config:
        try:
            cfg.update(parse_config_text(Path(ns.config).read_text(encoding="utf-8")))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    for key, val in vars(ns).items():
        if key in ("config", "subcommand") or val is None:
            continue
        cfg[key] = str(val)
    return cfg


def _num(cfg, key, default=None, cast=float):
    if key not in cfg:
        return default
    try:
        return cast(cfg[key])
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc


class Run:
    """Holds the merged configuration and the files written so far."""

    def __init__(self, subcommand: str, cfg: dict):
        self.subcommand = subcommand
        self.cfg = cfg
        self.tol = _num(cfg, "tol", 1e-10)
        self.t_max = _num(cfg, "t_max", 1.0)
        self.steps = _num(cfg, "steps", 101, int)
        self.fmt = cfg.get("format", "csv")
        self.out = cfg.get("out")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if not self.t_max > 0:
            raise ConfigError("t_max must be positive")
        if self.steps < 2:
            raise ConfigError("steps must be at least 2")
        if self.fmt not in ("csv", "svg", "both"):
            raise ConfigError("format must be csv, svg or both")
        if self.fmt != "csv" and not self.out:
            raise ConfigError("svg output needs --out")
        try:
            l2 = _num(cfg, "lambda2_sq")
            self.k = default_cost_constants(_num(cfg, "lambda0", 1.0), l2)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        self.written = []
        if self.out:
            Path(self.out).parent.mkdir(parents=True, exist_ok=True)
            with open(self.out, "a", encoding="utf-8"):
                pass

    def profile_spec(self):
        fam = self.cfg.get("profile")
        if not fam:
            raise ConfigError("a profile family is required (--profile)")
        params = {k.split(".", 1)[1]: float(v) for k, v in self.cfg.items() if k.startswith("profile.")}
        try:
            return fam, params, spec_from_params(fam, **params)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def emit_csv(self, columns, rows, path=None):
        buf = io.StringIO(newline="")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([v if isinstance(v, str) else repr(float(v)) for v in r])
        self._write(buf.getvalue(), path)

    def _write(self, text, path=None):
        path = path or self.out
        if path is None:
            sys.stdout.write(text)
            return
        if self.fmt == "svg" and path == self.out:
            return
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        self.written.append(str(path))

    def emit_svg(self, x, series, **kw):
        if self.fmt in ("svg", "both"):
            path = str(Path(self.out).with_suffix(".svg"))
            emit_svg(path, x, series, **kw)
            self.written.append(path)

    def manifest(self, wall):
        if not self.out:
            return
        files = {}
        for p in self.written:
            files[p] = hashlib.sha256(Path(p).read_bytes()).hexdigest()
        man = {"subcommand": self.subcommand, "config": dict(sorted(self.cfg.items())),
               "versions": {"bicost": __version__, "python": platform.python_version(),
                            "numpy": np.__version__, "scipy": __import__("scipy").__version__},
               "wall_time_s": round(wall, 6), "files": files}
        with open(str(self.out) + ".manifest.json", "w", encoding="utf-8") as fh:
            json.dump(man, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _initial_data(run: Run, fam: str, params: dict, model):
    if "rho0" in run.cfg:
        return _num(run.cfg, "rho0"), _num(run.cfg, "rho_dot0", 0.0)
    name = _ANALYTIC_FOR.get(fam)
    if fam == "example1":
        name = "example1case2" if params["b2"] == 2 else "example1case1"
        params = params if name == "example1case1" else {"b1": params["b1"]}
    if name:
        a = analytic_auxiliary(name, t_span=(0.0, run.t_max), n_samples=2, **params)
        r, v, _ = a.state(0.0)
        return float(r), float(v)
    return ground_state_initial(model, 0.0)


def cmd_cost(run: Run):
    fam, params, spec = run.profile_spec()
    if isinstance(spec, TimeIndepGeneralized):
        return cmd_timeindep(run)
    model = spec.reduced()
    r0, v0 = _initial_data(run, fam, params, model)
    traj = solve_auxiliary(model, r0, v0, (0.0, run.t_max), run.tol, n_samples=run.steps)
    df = derived_functions(traj, model)
    F2 = cost_function(df, run.k)
    bps = model.omega.breakpoints if isinstance(model, OTF) else model.A1.breakpoints
    ct = total_cost(F2, (0.0, run.t_max), tol=run.tol, n_samples=run.steps, f_fn=df.f3,
                    lambda12=math.sqrt(run.k.lambda12_sq), breakpoints=bps)
    buf = io.StringIO(newline="")
    write_cost_csv(ct, buf)
    run._write(buf.getvalue())
    if run.out:
        rows = zip(traj.times, traj.rho, traj.rho_dot, df.f3(traj.times))
        run.emit_csv(("t", "rho", "rho_dot", "f"), rows, str(Path(run.out).with_suffix("")) + "_trajectory.csv")
    run.emit_svg(ct.times, [("C(t)", ct.cumulative, "solid"), ("bound", ct.bound, "dashed")],
                 title=f"total cost: {fam}", xlabel="t", ylabel="C")


def cmd_quench(run: Run):
    fig = _num(run.cfg, "quench.figure", None, int)
    if fig is not None:
        data = figure_data(f"fig{fig}", run.k)
        buf = io.StringIO(newline="")
        data.write_csv(buf)
        run._write(buf.getvalue())
        x = data.data[:, 0]
        series = []
        for j, name in enumerate(data.columns[1:], 1):
            style = "solid" if name.startswith(("exact", "cost")) else "dashdot"
            series.append((name, data.data[:, j], style))
        labels = {1: "Delta S", 2: "Delta S", 3: "F_N^2", 4: "F_N^2"}
        run.emit_svg(x, series, title=f"quench figure {fig}", xlabel="beta", ylabel=labels[fig])
        return
    beta = _num(run.cfg, "quench.beta", 1.0)
    s_max = _num(run.cfg, "quench.s_max", 10.0)
    mode = run.cfg.get("quench.mode", "exact")
    if not (beta > 0 and s_max > 0):
        raise ConfigError("beta and s_max must be positive")
    p = QuenchParams.from_beta(beta)
    s = np.linspace(0.0, s_max, run.steps)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        dS = shannon_delta(p, s, mode)
    rows = zip(s, dS, quench_f(p, s), quench_cost(p, run.k, s))
    run.emit_csv(("s", "delta_S", "f", "F_N2"), rows)
    run.emit_svg(s, [(f"Delta S ({mode})", dS, "solid")], title=f"quench beta={beta:g}", xlabel="s",
                 ylabel="Delta S")


def cmd_equiv(run: Run):
    fam, params, spec = run.profile_spec()
    model = spec.reduced() if hasattr(spec, "reduced") else spec
    if not isinstance(model, (OTF, OTMF)):
        raise ConfigError("equiv needs a time-dependent profile")
    rep = verify_cost_equivalence(model, run.t_max, run.k, tol=run.tol, n_points=run.steps)
    run.emit_csv(("t", "F2_otmf", "B1_times_f_otf"), zip(rep.times, rep.F2_otmf, rep.B1_times_f_otf))
    sys.stderr.write(f"D_otmf={rep.D_otmf!r} D_otf={rep.D_otf!r} gap={rep.gap:.3e} "
                     f"f3_error={rep.f3_error:.3e}\n")
    run.emit_svg(rep.times, [("F2 (mass-frequency)", rep.F2_otmf, "solid"),
                             ("F2 (unit mass, at tau(t))", rep.F2_otf_at_tau, "dashdot")],
                 title=f"equivalence: {fam}", xlabel="t", ylabel="F^2")


def cmd_su11(run: Run):
    from . import su11
    from .equivalence import mass_from_B1
    from .profiles import CoefficientProfile, constant_profile, make_ck_coefficients

    n = _num(run.cfg, "su11.samples", 100, int)
    seed = _num(run.cfg, "su11.seed", 12345, int)
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n):
        scale = [1.0, 1e-6, 2.0][i % 3]
        b = tuple(complex(*rng.normal(size=2)) * scale for _ in range(3))
        if i % 3 == 2:
            b = (b[0].real, b[1].real, -abs(b[2].real))  # imaginary chi branch
        try:
            c = su11.decompose_b_to_c(b)
        except BicostError:
            continue
        err = float(np.max(np.abs(su11.matrix_from_b(b) - su11.matrix_from_c(c))))
        rows.append((f"roundtrip_{i}", "matrix_diff", err))
    one = constant_profile(1.0)
    xc = su11.solve_classical(one, one, 1.4)
    r = su11.verify_schrodinger_residual(lambda t: su11.evolution_operator(xc, t),
                                         lambda t: su11.hamiltonian_matrix(one, one, t), np.linspace(0.05, 1.3, 26))
    rows.append(("constant_ho", "schrodinger_residual", r))
    A1, B1 = make_ck_coefficients(1.0, 1.0, 0.6)
    m1 = mass_from_B1(B1)
    w1 = CoefficientProfile(lambda t: np.sqrt(A1(t) * B1(t)), lambda t: 0 * np.asarray(t, dtype=float),
                            lambda t: 0 * np.asarray(t, dtype=float))
    xc = su11.solve_classical(m1, w1, 1.0)
    r = su11.verify_schrodinger_residual(lambda t: su11.evolution_operator(xc, t),
                                         lambda t: su11.hamiltonian_matrix(m1, w1, t), np.linspace(0.05, 0.9, 18))
    rows.append(("caldirola_kanai", "schrodinger_residual", r))
    run.emit_csv(("case", "quantity", "value"), rows)


def cmd_zeta(run: Run):
    gp, gm = solve_mean_ratio()
    r = 1 / (2 * math.sqrt(3))
    rows = [("a_over_omega_plus", r), ("a_over_omega_minus", -r), ("gamma_plus", gp), ("gamma_minus", gm),
            ("zeta_m1_at_root_minus", hurwitz_zeta_nonpos(-1, 0.5 - r)),
            ("zeta_m1_at_root_plus", hurwitz_zeta_nonpos(-1, 0.5 + r)),
            ("zeta_m2_positive_root", hurwitz_zeta_nonpos(-2, 0.5 + r)),
            ("lambda1_sq", run.k.lambda1_sq), ("lambda2_sq", run.k.lambda2_sq),
            ("lambda12_sq", run.k.lambda12_sq)]
    run.emit_csv(("quantity", "value"), rows)


def cmd_timeindep(run: Run):
    fam, params, spec = run.profile_spec()
    if not isinstance(spec, TimeIndepGeneralized):
        raise ConfigError("timeindep needs --profile timeindep")
    res = cost_timeindep(spec, run.k)
    rows = [("F2", res.F2), ("complexity", res.complexity), ("omega", res.omega), ("mean", res.mean),
            ("mean_root_1", res.mean_roots[0]), ("mean_root_2", res.mean_roots[1])]
    if res.force_regulator_sq is not None:
        rows.append(("force_regulator_sq", res.force_regulator_sq))
    if res.epsilon is not None:
        rows.append(("epsilon", res.epsilon))
        rows.append(("mean_sign", float(np.sign(res.mean))))
    run.emit_csv(("quantity", "value"), rows)


COMMANDS = {"cost": cmd_cost, "quench": cmd_quench, "equiv": cmd_equiv, "su11-check": cmd_su11,
            "zeta": cmd_zeta, "timeindep": cmd_timeindep}


def main(argv=None) -> int:
    ap = _build_parser()
    ns = ap.parse_args(argv)
    start = time.perf_counter()
    try:
        run = Run(ns.subcommand, _merge(ns))
        COMMANDS[ns.subcommand](run)
    except (ConfigError, ValueError) as exc:
        sys.stderr.write(f"bicost: configuration error: {exc}\n")
        return EXIT_CONFIG
    except (BicostError, ArithmeticError) as exc:
        sys.stderr.write(f"bicost: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except OSError as exc:
        sys.stderr.write(f"bicost: I/O failure: {exc}\n")
        return EXIT_IO
    run.manifest(time.perf_counter() - start)
    return 0


if __name__ == "__main__":
    sys.exit(main())
