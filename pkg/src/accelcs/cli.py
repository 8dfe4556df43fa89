"""Command-line surface: evaluate states, emit figure data, run validation
suites, propagate numerically, and convert units.

Every output file starts with a '#'-prefixed JSON header echoing the fully
resolved parameters and the tool version, so a run can be reproduced byte
for byte from its own output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .numerics import Grid1D, WaveField, grid_inner_product
from .observables import UnitsMap, arrival_analysis, label_convert
from .propagator import PropagatorConfig, propagate
from .states import (
    CsParams,
    EnergyLabel,
    EtaLabel,
    GcsLabel,
    IomParams,
    ModelConfig,
    cs_wavefunction,
    eta_state,
    fock_wavefunction,
    gcs_wavefunction,
    stationary_state,
)
from .validation import DEFAULT_SEED, SUITES, run_suite

OUTPUT_DIR_ENV = "ACCELCS_OUTPUT_DIR"


def _resolve_out(path: str | None, default_name: str) -> str:
    name = path if path else default_name
    if not os.path.dirname(name):
        base = os.environ.get(OUTPUT_DIR_ENV, "")
        if base:
            name = os.path.join(base, name)
    return name


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_table(path: str, header: dict, names: list[str], columns: list, fmt: str):
    header = dict(header)
    header["version"] = __version__
    if fmt == "csv":
        lines = ["# " + json.dumps(header, sort_keys=True)]
        lines.append(",".join(names))
        rows = zip(*columns)
        for row in rows:
            lines.append(",".join(c if isinstance(c, str) else _fmt(c) for c in row))
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "header": header,
            "columns": {
                n: [c if isinstance(c, str) else float(c) for c in col]
                for n, col in zip(names, columns)
            },
        }
        text = json.dumps(payload, sort_keys=True) + "\n"
    with open(path, "w") as fh:
        fh.write(text)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data


def _pick(args, config: dict, key: str, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _parse_complex(text) -> complex:
    if isinstance(text, (int, float, complex)):
        return complex(text)
    return complex(text.replace(" ", ""))


def _family_evaluator(family: str, p: dict):
    cfg = ModelConfig(p["f_q"])
    if family == "cs":
        cs = CsParams(p["sigma_q"], _parse_complex(p["z"]))
        return lambda q, tau: cs_wavefunction(q, tau, cs, cfg)
    if family == "gcs":
        iom = IomParams(_parse_complex(p["c1"]), _parse_complex(p["c2"]))
        label = GcsLabel.from_z(_parse_complex(p["z"]), iom)
        return lambda q, tau: gcs_wavefunction(q, tau, label, iom, cfg)
    if family == "eta":
        lab = EtaLabel(p["eta"])
        return lambda q, tau: eta_state(q, tau, lab, cfg)
    if family == "stationary":
        eps = EnergyLabel(p["epsilon"])
        return lambda q, tau: stationary_state(q, eps, cfg) * np.exp(
            -1j * p["epsilon"] * tau
        )
    if family == "fock":
        cs = CsParams(p["sigma_q"], 0.0)
        iom = cs.to_iom()
        n = int(p["n"])
        return lambda q, tau: fock_wavefunction(n, q, tau, iom, cfg)
    raise ValueError(f"unknown family {family!r}")


def cmd_eval(args) -> int:
    config = _load_config(args.config)
    family = _pick(args, config, "family", None)
    if family is None:
        print("eval: --family is required", file=sys.stderr)
        return 2
    params = {
        "family": family,
        "f_q": float(_pick(args, config, "f_q", 1.0)),
        "q_min": float(_pick(args, config, "q_min", -8.0)),
        "q_max": float(_pick(args, config, "q_max", 8.0)),
        "n_points": int(_pick(args, config, "n_points", 801)),
        "tau_list": _pick(args, config, "tau_list", "0"),
        "format": _pick(args, config, "format", "csv"),
    }
    for key in ("sigma_q", "eta", "epsilon"):
        val = _pick(args, config, key, None)
        if val is not None:
            params[key] = float(val)
    for key in ("z", "c1", "c2"):
        val = _pick(args, config, key, None)
        if val is not None:
            params[key] = str(val)
    nval = _pick(args, config, "n", None)
    if nval is not None:
        params["n"] = int(nval)
    try:
        evaluator = _family_evaluator(family, params)
    except (KeyError, ValueError) as exc:
        msg = f"missing parameter {exc}" if isinstance(exc, KeyError) else str(exc)
        print(f"eval: {msg}", file=sys.stderr)
        return 2
    taus = [float(t) for t in str(params["tau_list"]).split(",")]
    grid = Grid1D(params["q_min"], params["q_max"], params["n_points"])
    q = grid.nodes()
    col_q, col_tau, col_re, col_im, col_rho = [], [], [], [], []
    for tau in taus:
        psi = np.asarray(evaluator(q, tau), dtype=complex)
        col_q.extend(q.tolist())
        col_tau.extend([tau] * len(q))
        col_re.extend(psi.real.tolist())
        col_im.extend(psi.imag.tolist())
        col_rho.extend((np.abs(psi) ** 2).tolist())
    out = _resolve_out(args.out, f"eval_{family}.{params['format']}")
    _write_table(
        out,
        {"command": "eval", "params": params},
        ["q", "tau", "re_psi", "im_psi", "rho"],
        [col_q, col_tau, col_re, col_im, col_rho],
        params["format"],
    )
    print(out)
    return 0


def cmd_figure(args) -> int:
    config = _load_config(args.config)
    which = args.which
    fmt = _pick(args, config, "format", "csv")
    col_q, col_rho, col_label = [], [], []
    if which == "fig1":
        sigma = 0.2
        cs = CsParams(sigma, label_convert(0.0, 0.0, sigma))
        cfg = ModelConfig(0.0)
        grid = Grid1D(-1.2, 1.2, 2401)
        q = grid.nodes()
        rho = np.abs(cs_wavefunction(q, 0.0, cs, cfg)) ** 2
        col_q = q.tolist()
        col_rho = rho.tolist()
        col_label = ["initial"] * len(q)
        params = {"which": which, "sigma_q": sigma, "q0": 0.0, "tau": 0.0}
    elif which == "fig2":
        sigma = 0.4
        cs = CsParams(sigma, label_convert(0.0, 1.0, sigma))
        grid = Grid1D(-2.0, 3.5, 5501)
        q = grid.nodes()
        series = [("initial", 0.0, 0.0)]
        for F in (2.0, 6.0):
            arr = arrival_analysis(1.0, 0.0, 1.0, sigma, ModelConfig(F))
            series.append((f"F_q={F:g}", F, arr.tau_q))
        for name, F, tau in series:
            rho = np.abs(cs_wavefunction(q, tau, cs, ModelConfig(F))) ** 2
            col_q.extend(q.tolist())
            col_rho.extend(rho.tolist())
            col_label.extend([name] * len(q))
        params = {"which": which, "sigma_q": sigma, "q0": 0.0, "p0": 1.0,
                  "forces": [2.0, 6.0]}
    else:
        print(f"figure: unknown figure {which!r}", file=sys.stderr)
        return 2
    out = _resolve_out(args.out, f"{which}.{fmt}")
    _write_table(
        out,
        {"command": "figure", "params": params},
        ["q", "rho", "series_label"],
        [col_q, col_rho, col_label],
        fmt,
    )
    print(out)
    return 0


def cmd_validate(args) -> int:
    config = _load_config(args.config)
    seed = int(_pick(args, config, "seed", DEFAULT_SEED))
    names = list(args.suites)
    if args.all or not names:
        names = sorted(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        print(
            f"validate: unknown suite(s) {unknown}; available: {sorted(SUITES)}",
            file=sys.stderr,
        )
        return 2
    reports = []
    for name in names:
        if name == "schrodinger_residual":
            for family, tol in (
                ("eta", 1e-4),
                ("gcs", 1e-4),
                ("cs", 1e-4),
                ("stationary", 1e-6),
            ):
                reports.append(run_suite(name, seed=seed, family=family, tol=tol))
        else:
            reports.append(run_suite(name, seed=seed))
    all_passed = True
    for rep in reports:
        for c in rep.checks:
            status = "PASS" if c.passed else "FAIL"
            print(f"{rep.suite_name}/{c.name}: error={c.error:.6e} tol={c.tol:.1e} {status}")
        all_passed = all_passed and rep.passed
    payload = {
        "version": __version__,
        "seed": seed,
        "passed": all_passed,
        "reports": [r.to_dict() for r in reports],
    }
    out = _resolve_out(args.out, "validation_report.json")
    with open(out, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(out)
    return 0 if all_passed else 1


def cmd_propagate(args) -> int:
    config = _load_config(args.config)
    family = _pick(args, config, "family", "cs")
    params = {
        "family": family,
        "f_q": float(_pick(args, config, "f_q", 1.0)),
        "q_min": float(_pick(args, config, "q_min", -10.0)),
        "q_max": float(_pick(args, config, "q_max", 10.0)),
        "n_points": int(_pick(args, config, "n_points", 2048)),
        "dt": float(_pick(args, config, "dt", 1e-4)),
        "n_steps": int(_pick(args, config, "n_steps", 1000)),
        "format": _pick(args, config, "format", "csv"),
    }
    for key in ("sigma_q",):
        val = _pick(args, config, key, None)
        if val is not None:
            params[key] = float(val)
    for key in ("z", "c1", "c2"):
        val = _pick(args, config, key, None)
        if val is not None:
            params[key] = str(val)
    if family not in ("cs", "gcs"):
        print("propagate: family must be cs or gcs", file=sys.stderr)
        return 2
    try:
        evaluator = _family_evaluator(family, params)
    except (KeyError, ValueError) as exc:
        print(f"propagate: {exc}", file=sys.stderr)
        return 2
    grid = Grid1D(params["q_min"], params["q_max"], params["n_points"])
    cfg = PropagatorConfig(grid, params["dt"], params["n_steps"])
    model = ModelConfig(params["f_q"])
    initial = WaveField.sample(grid, 0.0, lambda q: evaluator(q, 0.0))
    result = propagate(initial, cfg, model)
    exact = np.asarray(evaluator(grid.nodes(), result.field.tau), dtype=complex)
    diff = WaveField(grid, result.field.tau, result.field.values - exact)
    l2 = math.sqrt(abs(grid_inner_product(diff, diff).real))
    psi = result.field.values
    header = {
        "command": "propagate",
        "params": params,
        "tau_final": result.field.tau,
        "norm_drift": result.norm_drift,
        "boundary_mass": result.boundary_mass,
        "contaminated": result.contaminated,
        "l2_error_vs_analytic": l2,
    }
    out = _resolve_out(args.out, f"propagate_{family}.{params['format']}")
    q = grid.nodes()
    _write_table(
        out,
        header,
        ["q", "tau", "re_psi", "im_psi", "rho"],
        [
            q.tolist(),
            [result.field.tau] * len(q),
            psi.real.tolist(),
            psi.imag.tolist(),
            (np.abs(psi) ** 2).tolist(),
        ],
        params["format"],
    )
    print(out)
    return 0


def cmd_units(args) -> int:
    config = _load_config(args.config)
    try:
        units = UnitsMap(
            m=float(_pick(args, config, "m", 1.0)),
            hbar=float(_pick(args, config, "hbar", 1.0)),
            l=float(_pick(args, config, "l", 1.0)),
            F_x=float(_pick(args, config, "f_x", 0.0)),
        )
    except ValueError as exc:
        print(f"units: {exc}", file=sys.stderr)
        return 2
    rows = []
    if args.direction == "to_dimensionless":
        if args.x is not None:
            rows.append(("x", args.x, "q", float(units.q_from_x(args.x))))
        if args.t is not None:
            rows.append(("t", args.t, "tau", float(units.tau_from_t(args.t))))
        if args.p_x is not None:
            rows.append(("p_x", args.p_x, "p_q", float(units.p_q_from_p_x(args.p_x))))
        rows.append(("F_x", units.F_x, "F_q", units.F_q()))
    else:
        if args.q is not None:
            rows.append(("q", args.q, "x", float(units.x_from_q(args.q))))
        if args.tau is not None:
            rows.append(("tau", args.tau, "t", float(units.t_from_tau(args.tau))))
        if args.p_q is not None:
            rows.append(("p_q", args.p_q, "p_x", float(units.p_x_from_p_q(args.p_q))))
        rows.append(("F_q", units.F_q(), "F_x", units.F_x))
    for src, sval, dst, dval in rows:
        print(f"{src} = {_fmt(sval)}  ->  {dst} = {_fmt(dval)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="accelcs",
        description="States of a particle in a uniform force field: evaluation, "
        "figures, validation, propagation, units.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with defaults; flags override")
        p.add_argument("--out", help="output path")
        p.add_argument("--format", choices=["csv", "json"], default=None)

    p_eval = sub.add_parser("eval", help="evaluate a state family on a grid")
    common(p_eval)
    p_eval.add_argument("--family", choices=["cs", "gcs", "eta", "stationary", "fock"])
    p_eval.add_argument("--f-q", dest="f_q", type=float)
    p_eval.add_argument("--sigma-q", dest="sigma_q", type=float)
    p_eval.add_argument("--z")
    p_eval.add_argument("--c1")
    p_eval.add_argument("--c2")
    p_eval.add_argument("--eta", type=float)
    p_eval.add_argument("--epsilon", type=float)
    p_eval.add_argument("--n", type=int)
    p_eval.add_argument("--q-min", dest="q_min", type=float)
    p_eval.add_argument("--q-max", dest="q_max", type=float)
    p_eval.add_argument("--n-points", dest="n_points", type=int)
    p_eval.add_argument("--tau-list", dest="tau_list")
    p_eval.set_defaults(func=cmd_eval)

    p_fig = sub.add_parser("figure", help="emit figure data")
    common(p_fig)
    p_fig.add_argument("which", choices=["fig1", "fig2"])
    p_fig.set_defaults(func=cmd_figure)

    p_val = sub.add_parser("validate", help="run verification suites")
    common(p_val)
    p_val.add_argument("suites", nargs="*", help="suite names (default: all)")
    p_val.add_argument("--all", action="store_true")
    p_val.add_argument("--seed", type=int)
    p_val.set_defaults(func=cmd_validate)

    p_prop = sub.add_parser("propagate", help="Crank-Nicolson evolution of a state")
    common(p_prop)
    p_prop.add_argument("--family", choices=["cs", "gcs"])
    p_prop.add_argument("--f-q", dest="f_q", type=float)
    p_prop.add_argument("--sigma-q", dest="sigma_q", type=float)
    p_prop.add_argument("--z")
    p_prop.add_argument("--c1")
    p_prop.add_argument("--c2")
    p_prop.add_argument("--q-min", dest="q_min", type=float)
    p_prop.add_argument("--q-max", dest="q_max", type=float)
    p_prop.add_argument("--n-points", dest="n_points", type=int)
    p_prop.add_argument("--dt", type=float)
    p_prop.add_argument("--n-steps", dest="n_steps", type=int)
    p_prop.set_defaults(func=cmd_propagate)

    p_units = sub.add_parser("units", help="convert between unit systems")
    common(p_units)
    p_units.add_argument("--m", type=float)
    p_units.add_argument("--hbar", type=float)
    p_units.add_argument("--l", type=float)
    p_units.add_argument("--f-x", dest="f_x", type=float)
    p_units.add_argument(
        "--direction",
        choices=["to_dimensionless", "to_dimensional"],
        default="to_dimensionless",
    )
    p_units.add_argument("--x", type=float)
    p_units.add_argument("--t", type=float)
    p_units.add_argument("--p-x", dest="p_x", type=float)
    p_units.add_argument("--q", type=float)
    p_units.add_argument("--tau", type=float)
    p_units.add_argument("--p-q", dest="p_q", type=float)
    p_units.set_defaults(func=cmd_units)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
