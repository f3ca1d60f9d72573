"""Command-line experiment runner.

Every command writes a CSV report whose first lines are ``#`` comments
holding the package version and the fully resolved configuration as JSON.
Exit codes: 0 on success, 1 on invalid input, 2 when a budget is exhausted.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import warnings

import numpy as np

from . import __version__
from ._util import opnorm
from .altint import ROUTES, converge_study
from .config import ConfigError, ExperimentConfig, parse_floats, parse_schedule
from .errors import BudgetExceeded, QuadratureBudgetExceeded, SpectralSumError, TailTooHeavy
from .fourier import parse_function_spec
from .instances import load_pair
from .linalg import eig_hermitian

__all__ = ["main", "run", "build_parser"]

BUDGET_ERRORS = (BudgetExceeded, TailTooHeavy, QuadratureBudgetExceeded)


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return "" if math.isnan(v) else repr(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        return repr(complex(v))
    return str(v)


class Report:
    def __init__(self, columns):
        self.columns = list(columns)
        self.rows: list = []
        self.notes: list = []

    def add(self, *row):
        self.rows.append([_fmt(v) for v in row])

    def note(self, key, value):
        self.notes.append(f"# {key}: {_fmt(value)}")

    def render(self, config: ExperimentConfig) -> str:
        buf = io.StringIO()
        buf.write(f"# spectralsum {__version__}\n")
        buf.write(f"# config: {config.to_json()}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        w.writerows(self.rows)
        for line in self.notes:
            buf.write(line + "\n")
        return buf.getvalue()


def _specs(cfg):
    A, B = load_pair(cfg.pair, cfg.A, cfg.B)
    return eig_hermitian(A), eig_hermitian(B)


def _function(cfg, specA, specB):
    R = abs(cfg.a) * specA.norm + abs(cfg.b) * specB.norm
    try:
        return parse_function_spec(cfg.function, radius=1.25 * R if R > 0 else 1.0)
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError("function", str(exc)) from exc


def _local_orders(schedule, errors):
    out = [float("nan")]
    for (n0, e0), (n1, e1) in zip(zip(schedule, errors), zip(schedule[1:], errors[1:])):
        out.append(-math.log(e1 / e0) / math.log(n1 / n0) if e0 > 0 and e1 > 0 else float("nan"))
    return out


def cmd_converge(cfg):
    specA, specB = _specs(cfg)
    f = _function(cfg, specA, specB)
    rep = converge_study(specA, specB, cfg.a, cfg.b, f, cfg.schedule, cfg.route, order=cfg.order)
    out = Report(["N", "error", "order"])
    for N, e, o in zip(rep.schedule, rep.errors, _local_orders(rep.schedule, rep.errors)):
        out.add(N, e, o)
    out.note("route", rep.route)
    out.note("empirical_order", rep.empirical_order)
    return out


def cmd_pvm(cfg):
    from .pvm import WindowSpec, reconstruct_projector

    specA, specB = _specs(cfg)
    window = WindowSpec(cfg.alpha, None if cfg.variant == "atom" else cfg.beta,
                        tuple(cfg.eps), tuple(cfg.schedule), cfg.variant)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        _, rep = reconstruct_projector(specA, specB, cfg.a, cfg.b, window, cfg.route, order=cfg.order)
    out = Report(["eps", "N", "error_to_exact", "stagnated"])
    for eps, N, err, ok in rep.table:
        # the column reports whether the N loop stagnated (stabilised)
        out.add(eps, N, err, ok)
    out.note("final_error", rep.final_error)
    out.note("boundary_defect", rep.boundary_defect)
    return out


def cmd_jordan(cfg):
    from .jordan import jordan_limit

    specA, specB = _specs(cfg)
    A, B = specA.matrix, specB.matrix
    target = 0.5 * (A @ B + B @ A)
    out = Report(["N", "error"])
    for N in cfg.schedule:
        out.add(N, opnorm(jordan_limit(specA, specB, N, cfg.route, order=cfg.order) - target))
    return out


def cmd_poly(cfg):
    from .jordan import parse_coeffs, poly_direct, poly_limit

    specA, specB = _specs(cfg)
    try:
        coeffs = parse_coeffs(cfg.coeffs)
    except ValueError as exc:
        raise ConfigError("coeffs", str(exc)) from exc
    target = poly_direct(specA.matrix, specB.matrix, coeffs)
    out = Report(["N", "error"])
    for N in cfg.schedule:
        out.add(N, opnorm(poly_limit(specA, specB, coeffs, N, cfg.route, order=cfg.order) - target))
    return out


def cmd_variation(cfg):
    from .pseudomeasure import atoms, closed_form_tv, pauli_pair, rotated_pair, total_variation

    ex = cfg.example
    eps = 0.0
    if ex == "pauli":
        specA, specB, phi, psi = pauli_pair()
        kind = "pauli"
    elif ex.startswith("rotated"):
        _, _, val = ex.partition(":")
        try:
            eps = float(val.removeprefix("eps=")) if val else 0.3
        except ValueError as exc:
            raise ConfigError("example", f"bad angle in {ex!r}") from exc
        specA, specB, phi, psi = rotated_pair(eps)
        kind = "rotated"
    elif ex == "custom":
        specA, specB = _specs(cfg)
        phi = psi = np.eye(specA.dim)[0]
        kind = None
    else:
        raise ConfigError("example", "must be pauli, rotated:eps=X or custom")
    out = Report(["N", "total_variation", "ratio", "closed_form_value"])
    prev = None
    for N in range(1, cfg.N_max + 1):
        tv = total_variation(atoms(specA, specB, phi, psi, N, cfg.order))
        ratio = tv / prev if prev else float("nan")
        closed = closed_form_tv(kind, N, eps) if kind else float("nan")
        out.add(N, tv, ratio, closed)
        prev = tv
    return out


def cmd_histories(cfg):
    from .histories import history_distribution, sample_histories

    specA, specB = _specs(cfg)
    psi = np.eye(specA.dim, dtype=complex)[0]
    exact = history_distribution(specA, specB, psi, cfg.N)
    idx, _, _ = sample_histories(specA, specB, psi, cfg.N, cfg.samples, cfg.seed)
    keys, counts = np.unique(idx, axis=0, return_counts=True)
    freq = {tuple(int(v) for v in k): c / cfg.samples for k, c in zip(keys, counts)}
    seq = [specB, specA] * cfg.N
    out = Report(["outcome", "exact_prob", "empirical_freq"])
    tv = 0.0
    for key in sorted(exact):
        label = " ".join(repr(float(s.eigenvalues[i])) for s, i in zip(seq, key))
        p, q = float(exact[key]), float(freq.get(key, 0.0))
        tv += 0.5 * abs(p - q)
        out.add(f"({label})", p, q)
    out.note("tv_distance", tv)
    return out


def cmd_continuum(cfg):
    from .continuum import Grid, dirichlet_fit, feynman_kac_ho, gaussian_state, weyl_check

    if cfg.task == "dirichlet":
        a, b, r2, vals = dirichlet_fit(cfg.n_list)
        out = Report(["n", "total_variation"])
        for n, v in zip(cfg.n_list, vals):
            out.add(n, v)
        out.note("fit_intercept", a)
        out.note("fit_slope", b)
        out.note("fit_r_squared", r2)
        return out
    grid = Grid(cfg.k, cfg.L)
    g = gaussian_state(grid)
    if cfg.task == "weyl":
        out = Report(["t", "N", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err"])
        for N in cfg.schedule:
            r = weyl_check(grid, g, g, cfg.t, N)
            out.add(cfg.t, N, r.lhs.real, r.lhs.imag, r.rhs.real, r.rhs.imag, r.abs_err)
        return out
    out = Report(["tau", "N", "approx", "exact", "rel_err", "rel_err_closed_form"])
    closed = math.exp(-cfg.tau / 2)
    for N in cfg.schedule:
        r = feynman_kac_ho(grid, 1.0, 1.0, cfg.tau, N, g, g)
        out.add(cfg.tau, N, r.approx.real, r.exact.real, r.rel_err, abs(r.approx - closed) / closed)
    return out


COMMAND_TABLE = {
    "converge": cmd_converge,
    "pvm": cmd_pvm,
    "jordan": cmd_jordan,
    "poly": cmd_poly,
    "variation": cmd_variation,
    "histories": cmd_histories,
    "continuum": cmd_continuum,
}


def run(cfg: ExperimentConfig, stdout=None) -> int:
    """Execute a validated configuration; returns the exit status."""
    stdout = stdout or sys.stdout
    cfg.validate()
    if cfg.command == "selftest":
        from .selftest import run_selftest

        return 0 if run_selftest(stdout) else 1
    text = COMMAND_TABLE[cfg.command](cfg).render(cfg)
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


# -- argument parsing -----------------------------------------------------------


def _operator_args(p):
    p.add_argument("--pair", default="pauli",
                   help="builtin pair: pauli, rotated:EPS, random:DIM:SEED, commuting")
    p.add_argument("--A", help="matrix JSON file for A (with --B)")
    p.add_argument("--B", help="matrix JSON file for B (with --A)")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--route", default="auto", choices=ROUTES)
    p.add_argument("--order", default="AB", choices=("AB", "BA"))


def _output_arg(p):
    p.add_argument("--output", "-o", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectralsum", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"spectralsum {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("converge", help="distance of F_N(f) to f(aA+bB) along N")
    _operator_args(p)
    p.add_argument("--function", default="gaussian:width=1")
    p.add_argument("--schedule", "--N-schedule", dest="schedule", default="1,2,4,...,256")
    _output_arg(p)

    p = sub.add_parser("pvm", help="spectral projector reconstruction")
    _operator_args(p)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=3.0)
    p.add_argument("--eps", default="1,0.25,0.0625,0.015625,0.00390625,0.0009765625")
    p.add_argument("--N", dest="schedule", default="1,2,4,...,256")
    p.add_argument("--variant", default="mollifier", choices=("mollifier", "atom", "bump"))
    _output_arg(p)

    p = sub.add_parser("jordan", help="Jordan product limit")
    _operator_args(p)
    p.add_argument("--N-schedule", "--schedule", dest="schedule", default="1,2,4,...,256")
    _output_arg(p)

    p = sub.add_parser("poly", help="symmetrized polynomial limit")
    _operator_args(p)
    p.add_argument("--coeffs", default="1,1,1", help="'p,q,c;p,q,c;...'")
    p.add_argument("--N-schedule", "--schedule", dest="schedule", default="1,2,4,...,256")
    _output_arg(p)

    p = sub.add_parser("variation", help="total variation of the pseudo-measures")
    _operator_args(p)
    p.add_argument("--example", default="pauli", help="pauli, rotated:eps=X or custom")
    p.add_argument("--N-max", dest="N_max", type=int, default=8)
    _output_arg(p)

    p = sub.add_parser("histories", help="sampled versus exact measurement histories")
    _operator_args(p)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--seed", type=int, default=None)
    _output_arg(p)

    p = sub.add_parser("continuum", help="grid checks: weyl, heatkernel, dirichlet")
    p.add_argument("task", choices=("weyl", "heatkernel", "dirichlet"))
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--L", type=float, default=20.0)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--N", dest="schedule", default=None)
    p.add_argument("--n-list", dest="n_list", default="4,16,64,256")
    _output_arg(p)

    p = sub.add_parser("selftest", help="run the invariant suite")
    return parser


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    d = dict(vars(ns))
    cfg = ExperimentConfig(command=d.pop("command"))
    try:
        if "schedule" in d:
            sched = d.pop("schedule")
            if sched is None:  # continuum defaults depend on the task
                sched = "256" if d.get("task") == "weyl" else "8,16,32,64"
            cfg.schedule = parse_schedule(sched)
    except ValueError as exc:
        raise ConfigError("schedule", str(exc)) from exc
    try:
        if "eps" in d:
            cfg.eps = parse_floats(d.pop("eps"))
    except ValueError as exc:
        raise ConfigError("eps", str(exc)) from exc
    try:
        if "n_list" in d:
            cfg.n_list = [int(v) for v in d.pop("n_list").split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError("n_list", str(exc)) from exc
    if d.get("k", 0) is None:
        d["k"] = 512 if d.get("task") == "weyl" else 256
    for key, val in d.items():
        setattr(cfg, key, val)
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return run(cfg)
    except ConfigError as exc:
        print(f"spectralsum: invalid {exc.field}: {exc.message}", file=sys.stderr)
        return 1
    except BUDGET_ERRORS as exc:
        print(f"spectralsum: budget exhausted: {exc}", file=sys.stderr)
        return 2
    except (ValueError, SpectralSumError, OSError) as exc:
        print(f"spectralsum: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
