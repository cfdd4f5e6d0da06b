"""Command line interface.

Parameters come from ``--params mu1,mu2,rho,r1,r2`` or ``--config file.json``
(an object with keys mu1, mu2, rho, r1, r2).  Scalar results are written as
JSON and sweeps or fields as CSV, every float with 17 significant digits
and complex numbers as ``{"re": ..., "im": ...}``.

Exit codes: 0 success, 1 a crosscheck row failed, 2 invalid input,
3 numerical failure.
"""

import argparse
import json
import math
import sys
import warnings

import numpy as np

from .errors import InvalidParameters, NumericalError
from .inversion import QuadrantSolver
from .kernel import special_points
from .model import classify, params_from_mapping, validate_params, wedge_geometry

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2, 3

_TABLE1 = {
    (0, 0): "chi=0, epsilon+delta+beta>=2pi: kappa=0",
    (0, -1): "chi=0, epsilon+delta+beta<2pi: kappa=-1",
    (-1, -1): "chi=-1, epsilon+delta+beta>=2pi: kappa=-1",
    (-1, -2): "chi=-1, epsilon+delta+beta<2pi: kappa=-2",
}


# ----------------------------------------------------------------------
# serialization

def fmt_float(x):
    """17 significant digits; ``NaN``/``inf`` become JSON null."""
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return f"{x:.17g}"


def to_json(obj, indent=2, _level=0):
    """JSON text with floats at 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return to_json({"re": obj.real, "im": obj.imag}, indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "value"):
        return to_json(obj.value, indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_csv(header, columns):
    """CSV text with a header row and floats at 17 significant digits."""
    rows = [",".join(header)]
    for vals in zip(*columns):
        rows.append(",".join(fmt_float(v) for v in vals))
    return "\n".join(rows) + "\n"


def read_csv(text):
    """Parse CSV written by :func:`to_csv`: ``(header, columns)``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    data = data.reshape(-1, len(header))
    return header, [data[:, k] for k in range(len(header))]


# ----------------------------------------------------------------------
# argument handling

def _parse_complex(text):
    text = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(text)
    except ValueError as exc:
        raise InvalidParameters(f"cannot parse complex number {text!r}",
                                quantity="--at") from exc


def _params(args):
    if args.config:
        with open(args.config) as fh:
            return params_from_mapping(json.load(fh))
    if args.params:
        vals = args.params.split(",")
        if len(vals) != 5:
            raise InvalidParameters("--params needs mu1,mu2,rho,r1,r2",
                                    quantity="--params")
        try:
            return validate_params(*(float(v) for v in vals))
        except ValueError as exc:
            if isinstance(exc, InvalidParameters):
                raise
            raise InvalidParameters(f"--params: {exc}", quantity="--params") from exc
    raise InvalidParameters("give --params or --config", quantity="params")


def _axis(text):
    return "vertical" if str(text).lower().startswith("v") else "horizontal"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quadescape",
        description="Escape and absorption probabilities of reflected "
                    "Brownian motion in the quadrant.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", help="mu1,mu2,rho,r1,r2")
    common.add_argument("--config", help="JSON file with mu1, mu2, rho, r1, r2")
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--format", choices=("json", "csv"), default=None,
                        help="output format (json for scalars, csv for grids)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("analyze", parents=[common],
                   help="angles, branch and special points, regime flags")

    p = sub.add_parser("evaluate", parents=[common],
                       help="psi1(x), or psi1, psi2 and psi at (x, y)")
    p.add_argument("--at", required=True, help="x or x,y (complex, e.g. 1+2j)")

    p = sub.add_parser("invert", parents=[common],
                       help="probabilities from a start point")
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, default=0.0)
    p.add_argument("--axis", default="h", help="axis of --u when --v is 0 (h or v)")
    p.add_argument("--method", choices=("auto", "bvp"), default="auto")

    p = sub.add_parser("sweep", parents=[common], help="axis grid to CSV")
    p.add_argument("--axis", default="h")
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--method", choices=("auto", "bvp"), default="auto")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo estimate")
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, default=0.0)
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scheme", choices=("bridge", "projection"), default="bridge")

    p = sub.add_parser("pde", parents=[common], help="finite-difference field to CSV")
    p.add_argument("--L", type=float, default=None)
    p.add_argument("--h", type=float, default=None)

    p = sub.add_parser("crosscheck", parents=[common], help="invariant battery")
    p.add_argument("--no-pde", action="store_true")
    return parser


# ----------------------------------------------------------------------
# commands

def cmd_analyze(args):
    p = _params(args)
    g = wedge_geometry(p)
    with warnings.catch_warnings(record=True):
        warnings.simplefilter("always")
        c = classify(p, g)
    solver = QuadrantSolver(p)
    return {
        "params": p.as_dict(),
        "geometry": g.as_dict(),
        "kernel": special_points(p).as_dict(),
        "classification": c.as_dict(),
        "table1_cell": _TABLE1.get((c.chi, c.kappa), "outside Table 1"),
        "asymptotics": {"horizontal": solver.asymptotics("h").as_dict(),
                        "vertical": solver.asymptotics("v").as_dict()},
    }


def cmd_evaluate(args):
    p = _params(args)
    parts = args.at.split(",")
    solver = QuadrantSolver(p, method="bvp")
    ev = solver.evaluators
    x = _parse_complex(parts[0])
    out = {"x": x, "psi1": complex(ev.psi1.evaluate(x))}
    if len(parts) > 1:
        y = _parse_complex(parts[1])
        out.update({"y": y, "psi2": complex(ev.psi2.evaluate(y)),
                    "psi": complex(solver.psi(x, y))})
    return out


def cmd_invert(args):
    p = _params(args)
    solver = QuadrantSolver(p, method=args.method)
    u, v = args.u, args.v
    if u < 0 or v < 0 or (u == 0 and v == 0):
        raise InvalidParameters("start point must be in the quadrant, not the origin",
                                quantity="--u/--v")
    if u > 0 and v > 0:
        pa, pe = solver.interior_probabilities(u, v)
    elif v == 0:
        pa, pe = (float(a[0]) for a in solver.axis_probabilities(u, _axis(args.axis)))
    else:
        pa, pe = (float(a[0]) for a in solver.axis_probabilities(v, "vertical"))
    return {"u": u, "v": v, "p_absorb": pa, "p_escape": pe}


def cmd_sweep(args):
    p = _params(args)
    if not 0 < args.lo < args.hi or args.points < 2:
        raise InvalidParameters("need 0 < --from < --to and --points >= 2",
                                quantity="--from/--to/--points")
    solver = QuadrantSolver(p, method=args.method)
    u = np.linspace(args.lo, args.hi, args.points)
    pa, pe = solver.axis_probabilities(u, _axis(args.axis))
    return ("csv", to_csv(["u", "p_absorb", "p_escape"], [u, pa, pe]))


def cmd_simulate(args):
    from .oracles.montecarlo import McConfig, mc_escape_prob
    p = _params(args)
    try:
        cfg = McConfig(dt=args.dt, n_paths=args.paths, seed=args.seed,
                       scheme=args.scheme).resolve(p)
        est = mc_escape_prob((args.u, args.v), p, cfg)
    except ValueError as exc:
        if isinstance(exc, InvalidParameters):
            raise
        raise InvalidParameters(str(exc), quantity="simulate") from exc
    out = {"start": [args.u, args.v], **est.as_dict(),
           "config": {"dt": cfg.dt, "eps_absorb": cfg.eps_absorb,
                      "R_escape": cfg.R_escape, "n_paths": cfg.n_paths,
                      "seed": cfg.seed, "max_time": cfg.max_time,
                      "scheme": cfg.scheme}}
    return out


def cmd_pde(args):
    from .oracles.pde import PdeConfig, pde_solve
    p = _params(args)
    L = args.L if args.L is not None else 10.0 * max(1 / p.mu1, 1 / p.mu2)
    n = 400 if args.h is None else int(round(L / args.h))
    try:
        grid = pde_solve(p, PdeConfig(L=L, n=n))
    except ValueError as exc:
        if isinstance(exc, InvalidParameters):
            raise
        raise InvalidParameters(str(exc), quantity="--L/--h") from exc
    U, V = np.meshgrid(grid.u, grid.u, indexing="ij")
    return ("csv", to_csv(["u", "v", "f"], [U.ravel(), V.ravel(), grid.f.ravel()]))


def cmd_crosscheck(args):
    from .crosscheck import format_table, run_battery
    p = _params(args)
    rows = run_battery(p, pde=not args.no_pde)
    if args.format == "json":
        text = to_json([r.as_dict() for r in rows]) + "\n"
    else:
        text = format_table(rows) + "\n"
    return ("raw", text, all(r.passed for r in rows))


_COMMANDS = {"analyze": cmd_analyze, "evaluate": cmd_evaluate, "invert": cmd_invert,
             "sweep": cmd_sweep, "simulate": cmd_simulate, "pde": cmd_pde,
             "crosscheck": cmd_crosscheck}


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(exc, code):
    payload = {"error": type(exc).__name__, "message": str(exc),
               "quantity": getattr(exc, "quantity", None)}
    constraint = getattr(exc, "constraint", None)
    if constraint:
        payload["constraint"] = constraint
    sys.stderr.write(to_json(payload) + "\n")
    return code


def run(argv=None):
    """Run the command line; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        result = _COMMANDS[args.command](args)
    except InvalidParameters as exc:
        return _error(exc, EXIT_INVALID)
    except NumericalError as exc:
        return _error(exc, EXIT_NUMERICAL)
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        return _error(exc, EXIT_INVALID)
    code = EXIT_OK
    if isinstance(result, tuple):
        if result[0] == "raw":
            text = result[1]
            code = EXIT_OK if result[2] else EXIT_CHECK_FAILED
        else:
            text = result[1]
            if args.format == "json":
                header, cols = read_csv(text)
                text = to_json([dict(zip(header, row)) for row in zip(*cols)]) + "\n"
    else:
        text = to_json(result) + "\n"
    _emit(text, args.out)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
