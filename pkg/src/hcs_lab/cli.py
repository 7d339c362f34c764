"""hcs-lab command line.

Exit codes: 0 success, 2 bad parameters, 3 numerical failure
(degenerate state, cutoff too small, ...), 4 herald failure.
"""

from __future__ import annotations

import argparse
import cmath
import math
import re
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import HcsLabError, HeraldFailed, NumericalError
from .figures import reproduce_figures
from .hcs import HcsParams, photon_distribution, wigner_closed
from .kerr import KerrSchemeParams, herald, transmissivity_sweep
from .metrics import (
    WignerMethod,
    as_squeezing_ymin,
    mandel_q,
    negativity_report,
    quadrature_squeezing,
    s_ass,
    skew_information,
    wigner_grid,
)
from .fock import wigner_point_oracle
from .hcs import build_hcs_fock
from .output import csv_text, fmt, json_text, svg_heatmap, svg_line_plot, write_text
from .validate import DEFAULT_SEED, run_validation

EXIT_OK, EXIT_PARAM, EXIT_NUMERIC, EXIT_HERALD = 0, 2, 3, 4

COMMANDS = (
    "photon-dist", "mandel", "skew", "quad-squeeze", "as-squeeze",
    "wigner", "kerr-sim", "reproduce-figures", "validate",
)

_ANGLE = re.compile(r"^\s*([+-]?)\s*(\d*\.?\d*(?:[eE][+-]?\d+)?)\s*\*?\s*(pi)?\s*(?:/\s*(\d*\.?\d+))?\s*$")


def parse_angle(text: str) -> float:
    """Decimal radians or a rational multiple of pi: "pi", "-pi/2", "0.75pi", "3pi/4"."""
    m = _ANGLE.match(str(text))
    if not m or (not m.group(2) and not m.group(3)):
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}")
    sign, num, pi, den = m.groups()
    value = float(num) if num else 1.0
    if pi:
        value *= math.pi
    if den:
        value /= float(den)
    return -value if sign == "-" else value


def parse_complex(text: str) -> complex:
    """ "re,im" or a bare real number."""
    parts = [t.strip() for t in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")


def parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def parse_bounds(text: str) -> tuple[float, float, float, float]:
    vals = parse_floats(text)
    if len(vals) != 4 or vals[0] >= vals[1] or vals[2] >= vals[3]:
        raise argparse.ArgumentTypeError("bounds must be xmin,xmax,pmin,pmax with min < max")
    return tuple(vals)


@dataclass
class Sweep:
    variable: str
    start: float
    stop: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass
class RunConfig:
    """Fully parsed invocation (the argparse namespace, typed)."""

    command: str
    params: list[HcsParams] | KerrSchemeParams | None = None
    sweep: Sweep | None = None
    output: Path | None = None
    format: str = "csv"
    extra: dict = field(default_factory=dict)


# --- config file --------------------------------------------------------------


def read_config(path) -> list[str]:
    """Flat key=value lines -> argv tokens; '#' starts a comment."""
    argv = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if value.lower() in ("true", "yes", "on"):
            argv.append(flag)
        elif value.lower() in ("false", "no", "off"):
            continue
        else:
            argv += [flag, value]
    return argv


def _expand_config(argv: list[str]) -> list[str]:
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ValueError("--config needs a path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2 :]
    # config values come right after the subcommand so explicit flags win
    cmd_pos = next((k for k, a in enumerate(rest) if a in COMMANDS), None)
    if cmd_pos is None:
        return rest + read_config(path)
    return rest[: cmd_pos + 1] + read_config(path) + rest[cmd_pos + 1 :]


# --- parser -------------------------------------------------------------------


def _hcs_flags(p: argparse.ArgumentParser, multi_eps: bool = True) -> None:
    g = p.add_argument_group("state")
    g.add_argument("--epsilon", type=parse_floats, default=[1.0],
                   help="superposition weight(s), comma separated" if multi_eps else "superposition weight")
    g.add_argument("--theta", type=parse_angle, default=0.0, help="coherent-branch phase")
    g.add_argument("--phi", type=parse_angle, default=0.0, help="photon-added-branch phase")
    g.add_argument("--alpha", type=parse_complex, default=None, help="coherent amplitude as re,im")
    g.add_argument("--alpha-mag", type=float, default=None)
    g.add_argument("--alpha-arg", type=parse_angle, default=None)
    g.add_argument("--cutoff", type=int, default=None, help="Fock cutoff (default: automatic)")
    g.add_argument("--lenient", action="store_true", help="warn instead of failing on truncation problems")


def _sweep_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("sweep")
    g.add_argument("--sweep-var", choices=("alpha-mag", "alpha-arg", "theta", "phi", "phi-quad"))
    g.add_argument("--sweep-from", type=parse_angle, default=0.0)
    g.add_argument("--sweep-to", type=parse_angle, default=1.0)
    g.add_argument("--sweep-steps", type=int, default=21)


def _out_flags(p: argparse.ArgumentParser, formats=("csv", "json", "svg")) -> None:
    p.add_argument("--output", "-o", type=Path, default=None, help="output file (default: stdout)")
    p.add_argument("--format", choices=formats, default=None, help="default: from the output suffix, else csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hcs-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hcs-lab {__version__}")
    parser.add_argument("--config", help="key=value file mirroring the long flags")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("photon-dist", help="photon-number distribution P_n")
    _hcs_flags(p)
    p.add_argument("--n-max", type=int, default=20)
    _out_flags(p)

    for name, helptext in (
        ("mandel", "Mandel Q parameter"),
        ("skew", "Wigner-Yanase skew information"),
        ("quad-squeeze", "quadrature squeezing S_phi"),
        ("as-squeeze", "amplitude-squared squeezing S_ass"),
    ):
        p = sub.add_parser(name, help=helptext)
        _hcs_flags(p)
        _sweep_flags(p)
        if name == "quad-squeeze":
            p.add_argument("--phi-quad", type=parse_angle, default=0.0)
        if name == "as-squeeze":
            p.add_argument("--ymin", action="store_true", help="report Y_min instead of S_ass")
        _out_flags(p)

    p = sub.add_parser("wigner", help="Wigner function at a point or on a grid")
    _hcs_flags(p, multi_eps=False)
    p.add_argument("--point", type=parse_complex, default=None, help="x,p")
    p.add_argument("--bounds", type=parse_bounds, default=None, help="xmin,xmax,pmin,pmax")
    p.add_argument("--nx", type=int, default=161)
    p.add_argument("--np", dest="np_", type=int, default=161)
    p.add_argument("--method", choices=[m.value for m in WignerMethod], default="closed")
    _out_flags(p)

    p = sub.add_parser("kerr-sim", help="cross-Kerr heralded preparation")
    p.add_argument("--alpha", type=parse_complex, default=complex(1.0, 0.0))
    p.add_argument("--phi0", type=float, default=0.01)
    p.add_argument("--theta-ps", type=parse_angle, default=-math.pi / 2)
    p.add_argument("--t", type=float, default=None, help="single beam-splitter transmissivity")
    p.add_argument("--t-from", type=float, default=0.0)
    p.add_argument("--t-to", type=float, default=1.0)
    p.add_argument("--t-steps", type=int, default=21)
    p.add_argument("--first-order", action="store_true", help="use the linearized Kerr evolution")
    p.add_argument("--no-wigner", action="store_true", help="skip the Wigner negativity column")
    p.add_argument("--cutoff", type=int, default=None)
    _out_flags(p)

    p = sub.add_parser("reproduce-figures", help="write the figure data and SVGs")
    p.add_argument("--out-dir", type=Path, default=Path("figures"))
    p.add_argument("--only", type=lambda s: s.split(","), default=None, help="subset, e.g. fig1,fig5")

    p = sub.add_parser("validate", help="closed form vs brute-force audit")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--draws", type=int, default=200)
    _out_flags(p, ("json", "csv"))
    return parser


# --- helpers ------------------------------------------------------------------


def _alpha(args) -> complex:
    if args.alpha_arg is not None and args.alpha_mag is None:
        raise ValueError("--alpha-arg needs --alpha-mag")
    if args.alpha is not None and args.alpha_mag is not None:
        raise ValueError("give either --alpha or --alpha-mag/--alpha-arg, not both")
    if args.alpha_mag is not None:
        if args.alpha_mag < 0:
            raise ValueError("--alpha-mag must be >= 0")
        return cmath.rect(args.alpha_mag, args.alpha_arg or 0.0)
    return args.alpha if args.alpha is not None else 0j


def _params(args, eps: float, **override) -> HcsParams:
    kw = dict(epsilon=eps, theta=args.theta, phi=args.phi, alpha=_alpha(args))
    kw.update(override)
    return HcsParams(**kw)


def _format(args) -> str:
    if args.format:
        return args.format
    if args.output is not None and args.output.suffix.lstrip(".") in ("csv", "json", "svg"):
        return args.output.suffix.lstrip(".")
    return "csv"


def _emit(args, text: str) -> None:
    if args.output is None:
        sys.stdout.write(text)
    else:
        write_text(args.output, text)


def _meta(args, **extra) -> dict:
    meta = {"command": args.command}
    for k in ("theta", "phi", "alpha_mag", "alpha_arg", "cutoff"):
        v = getattr(args, k, None)
        if v is not None:
            meta[k] = v
    if getattr(args, "alpha", None) is not None:
        meta["alpha"] = f"{fmt(args.alpha.real)};{fmt(args.alpha.imag)}"
    if getattr(args, "epsilon", None) is not None:
        meta["epsilon"] = ";".join(fmt(e) for e in args.epsilon)
    meta.update(extra)
    return meta


def _state_for(args, p: HcsParams):
    return build_hcs_fock(p, cutoff=args.cutoff, strict=not args.lenient)


_METRICS = {
    "mandel": ("Q", lambda s, a, strict: mandel_q(s, strict=strict)),
    "skew": ("skew", lambda s, a, strict: skew_information(s, strict=strict)),
    "quad-squeeze": ("S_phi", lambda s, a, strict: quadrature_squeezing(s, a.phi_quad, strict=strict)),
    "as-squeeze": (
        "S_ass",
        lambda s, a, strict: as_squeezing_ymin(s, strict=strict) if a.ymin else s_ass(s, strict=strict),
    ),
}


# --- commands -----------------------------------------------------------------


def cmd_photon_dist(args) -> int:
    if args.n_max < 0:
        raise ValueError("--n-max must be >= 0")
    cols = [photon_distribution(_params(args, e), args.n_max) for e in args.epsilon]
    header = ["n"] + [f"P_eps{e:g}" for e in args.epsilon]
    rows = [[n, *(c[n] for c in cols)] for n in range(args.n_max + 1)]
    fmt_ = _format(args)
    if fmt_ == "json":
        _emit(args, json_text({"n": list(range(args.n_max + 1)), "P": {f"{e:g}": c for e, c in zip(args.epsilon, cols)}}))
    elif fmt_ == "svg":
        series = {f"eps={e:g}": c for e, c in zip(args.epsilon, cols)}
        _emit(args, svg_line_plot(np.arange(args.n_max + 1), series, "Photon distribution", "n", "P_n"))
    else:
        _emit(args, csv_text(header, rows, _meta(args, n_max=args.n_max)))
    return EXIT_OK


def cmd_metric(args) -> int:
    name, fn = _METRICS[args.command]
    strict = not args.lenient
    if args.sweep_var is None:
        for eps in args.epsilon:
            value = fn(_state_for(args, _params(args, eps)), args, strict)
            prefix = f"eps={eps:g} " if len(args.epsilon) > 1 else ""
            print(f"{prefix}{fmt(value)}")
        return EXIT_OK
    if args.sweep_steps < 2:
        raise ValueError("--sweep-steps must be >= 2")
    sweep = Sweep(args.sweep_var, args.sweep_from, args.sweep_to, args.sweep_steps)
    a0 = _alpha(args)
    rows = []
    for v in sweep.values():
        row = [v]
        for eps in args.epsilon:
            if sweep.variable == "alpha-mag":
                p = _params(args, eps, alpha=cmath.rect(v, cmath.phase(a0)))
            elif sweep.variable == "alpha-arg":
                p = _params(args, eps, alpha=cmath.rect(abs(a0), v))
            elif sweep.variable in ("theta", "phi"):
                p = _params(args, eps, **{sweep.variable: v})
            else:
                if args.command != "quad-squeeze":
                    raise ValueError("phi-quad sweeps only apply to quad-squeeze")
                p = _params(args, eps)
            state = _state_for(args, p)
            if sweep.variable == "phi-quad":
                row.append(quadrature_squeezing(state, v, strict=strict))
            else:
                try:
                    row.append(fn(state, args, strict))
                except NumericalError:
                    row.append(float("nan"))
        rows.append(row)
    header = ["sweep_value"] + [f"{name}_eps{e:g}" for e in args.epsilon]
    fmt_ = _format(args)
    if fmt_ == "svg":
        arr = np.array(rows)
        series = {f"eps={e:g}": arr[:, k + 1] for k, e in enumerate(args.epsilon)}
        _emit(args, svg_line_plot(arr[:, 0], series, name, sweep.variable, name))
    elif fmt_ == "json":
        _emit(args, json_text({"sweep": sweep.variable, "header": header, "rows": rows}))
    else:
        _emit(args, csv_text(header, rows, _meta(args, sweep=sweep.variable)))
    return EXIT_OK


def cmd_wigner(args) -> int:
    if len(args.epsilon) != 1:
        raise ValueError("wigner takes a single --epsilon")
    p = _params(args, args.epsilon[0])
    method = WignerMethod(args.method)
    strict = not args.lenient
    if args.point is not None:
        if method is WignerMethod.CLOSED_FORM:
            value = wigner_closed(p, args.point)
        else:
            value = wigner_point_oracle(_state_for(args, p), args.point, strict=strict)
        print(fmt(value))
        return EXIT_OK
    source = p if method is WignerMethod.CLOSED_FORM else _state_for(args, p)
    grid = wigner_grid(source, args.bounds, args.nx, args.np_, method, strict=strict)
    rep = negativity_report(grid)
    fmt_ = _format(args)
    if fmt_ == "svg":
        _emit(args, svg_heatmap(grid.x, grid.p, grid.values, f"eps={p.epsilon:g}"))
    elif fmt_ == "json":
        _emit(args, json_text({
            "x": grid.x, "p": grid.p, "W": grid.values, "min_value": rep.min_value,
            "min_location": rep.min_location, "negative_volume": rep.negative_volume,
        }))
    else:
        rows = [[x, pv, grid.values[i, j]] for i, x in enumerate(grid.x) for j, pv in enumerate(grid.p)]
        meta = _meta(args, method=method.value, nx=args.nx, np=args.np_, negative_volume=rep.negative_volume)
        _emit(args, csv_text(["x", "p", "W"], rows, meta))
    return EXIT_OK


KERR_HEADER = ["t", "epsilon_fit", "success_prob", "fidelity", "Q", "S_phi0", "S_ass", "neg_volume"]


def cmd_kerr(args) -> int:
    if args.t is not None:
        kp = KerrSchemeParams(args.alpha, args.phi0, args.theta_ps, args.t, args.cutoff)
        res = herald(kp, first_order=args.first_order)
        f = res.fitted
        lines = {
            "success_probability": res.success_probability,
            "epsilon_fit": f.epsilon,
            "theta_fit": f.theta,
            "phi_fit": f.phi,
            "fidelity_to_fit": res.fidelity_to_fit,
            "span_residual": res.span_residual,
        }
        if _format(args) == "json" and args.output is not None:
            _emit(args, json_text(lines))
        else:
            sys.stdout.write("".join(f"{k}={fmt(v)}\n" for k, v in lines.items()))
        return EXIT_OK
    if args.t_steps < 2:
        raise ValueError("--t-steps must be >= 2")
    kp = KerrSchemeParams(args.alpha, args.phi0, args.theta_ps, 0.0, args.cutoff)
    ts = np.linspace(args.t_from, args.t_to, args.t_steps)
    rows = transmissivity_sweep(kp, ts, first_order=args.first_order, with_wigner=not args.no_wigner)
    table = [[r.t, r.epsilon_fit, r.success_prob, r.fidelity, r.q, r.s_phi0, r.s_ass, r.neg_volume] for r in rows]
    failed = [r.t for r in rows if r.status != "ok"]
    if failed:
        print(f"warning: {len(failed)} sweep point(s) failed: {', '.join(fmt(t) for t in failed)}", file=sys.stderr)
    fmt_ = _format(args)
    if fmt_ == "svg":
        arr = np.array(table)
        series = {"epsilon_fit": arr[:, 1], "success_prob": arr[:, 2], "fidelity": arr[:, 3]}
        _emit(args, svg_line_plot(arr[:, 0], series, "Kerr heralding", "t", "value"))
    elif fmt_ == "json":
        _emit(args, json_text({"header": KERR_HEADER, "rows": table, "status": [r.status for r in rows]}))
    else:
        meta = {
            "command": "kerr-sim",
            "alpha": f"{fmt(args.alpha.real)};{fmt(args.alpha.imag)}",
            "phi0": args.phi0,
            "theta_ps": args.theta_ps,
            "cutoff": kp.cutoff,
            "evolution": "first-order" if args.first_order else "exact",
        }
        _emit(args, csv_text(KERR_HEADER, table, meta))
    return EXIT_OK


def cmd_figures(args) -> int:
    status = reproduce_figures(args.out_dir, args.only)
    for name, s in status.items():
        print(f"{name}: {s}")
    return EXIT_OK if all(s == "ok" for s in status.values()) else EXIT_NUMERIC


def cmd_validate(args) -> int:
    report = run_validation(seed=args.seed, draws=args.draws)
    fmt_ = _format(args) if args.output is not None else "json"
    if args.output is not None:
        if fmt_ == "csv":
            header = ["formula", "regime", "samples", "printed", "oracle", "abs_dev", "rel_dev", "measure", "tolerance", "status", "params"]
            rows = [
                [r.formula, r.regime, r.samples, _cfmt(r.printed), _cfmt(r.oracle), r.abs_dev, r.rel_dev,
                 r.measure, r.tolerance, r.status, r.params]
                for r in report.rows
            ]
            write_text(args.output, csv_text(header, rows, {"command": "validate", "seed": args.seed, "draws": args.draws}))
        else:
            write_text(args.output, json_text(report.as_dict()))
    for r in report.rows:
        print(f"{r.status:9s} {r.formula:30s} {r.regime:30s} abs={fmt(r.abs_dev)} rel={fmt(r.rel_dev)}")
    print(f"{len(report.discrepancies)} discrepancy row(s) out of {len(report.rows)}")
    return EXIT_OK


def _cfmt(v) -> str:
    if isinstance(v, complex):
        return f"{fmt(v.real)}{'+' if v.imag >= 0 else '-'}{fmt(abs(v.imag))}j"
    return fmt(v)


HANDLERS = {
    "photon-dist": cmd_photon_dist,
    "mandel": cmd_metric,
    "skew": cmd_metric,
    "quad-squeeze": cmd_metric,
    "as-squeeze": cmd_metric,
    "wigner": cmd_wigner,
    "kerr-sim": cmd_kerr,
    "reproduce-figures": cmd_figures,
    "validate": cmd_validate,
}


_NEGATIVE_VALUE = re.compile(r"^-(\d|\.\d|pi)")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """'--bounds -3,3,-3,3' -> '--bounds=-3,3,-3,3' so argparse does not read a flag."""
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE_VALUE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        argv = _expand_config(argv)
    except (OSError, ValueError) as exc:
        print(f"hcs-lab: {exc}", file=sys.stderr)
        return EXIT_PARAM
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return HANDLERS[args.command](args)
    except HeraldFailed as exc:
        print(f"hcs-lab: herald failed: {exc}", file=sys.stderr)
        return EXIT_HERALD
    except NumericalError as exc:
        print(f"hcs-lab: numerical error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, TypeError, HcsLabError) as exc:
        print(f"hcs-lab: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
