"""Command-line front end.

    owid compute  --family x --params 0.3,0.3,-0.4,0.56
    owid oracle   --family bell --params 0.2,-0.5,0.6
    owid oracle   --matrix-file rho.json
    owid dynamics --family x --params 0.3,0.3,-0.4,0.56 --p-grid 0:1:0.001 --out traj.csv
    owid events   --family x --params 0.3,0.3,-0.4,0.56
    owid surface  --s 0.3 --target 0.03 --resolution 64 --format obj_mesh --out a.obj

JSON goes to stdout (or ``--out``); floats are printed with 12 significant
digits so identical runs give identical bytes. Exit codes: 0 success
(including an empty surface), 2 invalid input, 3 optimizer non-convergence.
"""

import argparse
import json
import math
import sys
import warnings

import numpy as np

from . import _backend
from .channels import dynamics_trajectory, find_crossing, find_sudden_death
from .closed_form import (
    concurrence_x_state,
    entropy_bell_diagonal,
    entropy_x_state,
    owid_bell_diagonal,
    owid_x_state,
)
from .errors import ConvergenceError, DomainError
from .geometry import EVALUATORS, SurfaceSpec, export_surface, sample_level_surface
from .linalg import DensityMatrix
from .oracle import (
    OptimizerConfig,
    concurrence_oracle,
    discord_oracle,
    min_measured_entropy_x_reduced,
    owid_oracle,
)
from .states import (
    BellDiagonalParams,
    XStateParams,
    bell_diagonal_density,
    params_from_json,
    params_to_json,
    validate_corner_condition,
    x_state_density,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NO_CONVERGENCE = 3


class InputError(ValueError):
    pass


def fmt_float(x):
    return f"{x:.12g}"


def _clean(obj):
    """Round floats to 12 significant digits; non-finite floats become null."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        x = float(fmt_float(x))
        return 0.0 if x == 0 else x  # no "-0.0"
    return obj


def dumps(obj):
    return json.dumps(_clean(obj), indent=2) + "\n"


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc}") from exc


# ---------------------------------------------------------------- input parsing


def _parse_params(args):
    if args.params is not None and args.params_file is not None:
        raise InputError("give --params or --params-file, not both")
    if args.params_file is not None:
        try:
            with open(args.params_file) as fh:
                raw = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.params_file}: {exc}") from exc
    elif args.params is not None:
        raw = args.params
    else:
        raise InputError("state parameters required (--params or --params-file)")
    raw = raw.strip()
    if raw.startswith("{"):
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON parameters: {exc}") from exc
        if not isinstance(obj, dict):
            raise InputError("JSON parameters must be an object")
        if args.family is not None:
            if obj.get("family", args.family) != args.family:
                raise InputError(f"--family {args.family} conflicts with JSON family {obj['family']!r}")
            obj = {**obj, "family": args.family}
        return params_from_json(obj)
    try:
        nums = [float(v) for v in raw.replace(" ", "").split(",") if v]
    except ValueError as exc:
        raise InputError(f"--params must be JSON or comma-separated numbers: {exc}") from exc
    family = args.family or ("x" if len(nums) == 4 else "bell")
    if family == "bell":
        if len(nums) != 3:
            raise InputError(f"bell family needs 3 numbers c1,c2,c3, got {len(nums)}")
        return BellDiagonalParams(*nums)
    if len(nums) != 4:
        raise InputError(f"x family needs 4 numbers s,c1,c2,c3, got {len(nums)}")
    return XStateParams(*nums)


def _as_complex_matrix(obj):
    if isinstance(obj, dict):
        if "real" not in obj:
            raise InputError('matrix object needs "real" (and optionally "imag")')
        re = np.asarray(obj["real"], dtype=float)
        im = np.asarray(obj.get("imag", np.zeros_like(re)), dtype=float)
        return re + 1j * im
    arr = np.asarray(obj, dtype=float)
    if arr.ndim == 3 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    return arr.astype(np.complex128)


def _load_matrix(path):
    try:
        if path.endswith(".npy"):
            m = np.load(path)
        else:
            with open(path) as fh:
                m = _as_complex_matrix(json.load(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: not a numeric matrix ({exc})") from exc
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (4, 4):
        raise InputError(f"{path}: expected a 4x4 matrix, got shape {m.shape}")
    return DensityMatrix(m)


def parse_p_grid(text):
    """``start:stop:step`` (inclusive of stop) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (float(v) for v in text.split(":"))
            if not step > 0 or stop < start:
                raise InputError(f"bad p grid {text!r}: need step > 0 and stop >= start")
            n = int(math.floor((stop - start) / step + 1e-9))
            grid = [start + k * step for k in range(n + 1)]
            if abs(grid[-1] - stop) <= 1e-9 * max(1.0, abs(stop)):
                grid[-1] = stop
            return grid
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"bad p grid {text!r}: {exc}") from exc


def _config(args):
    try:
        return OptimizerConfig(
            coarse_polar_steps=args.polar_steps,
            coarse_azimuth_steps=args.azimuth_steps,
            refine_iterations=args.refine_iterations,
            refine_tolerance=args.refine_tolerance,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc


# --------------------------------------------------------------------- commands


def _density(p):
    return bell_diagonal_density(p) if isinstance(p, BellDiagonalParams) else x_state_density(p)


def compute_report(p, cfg=None):
    p.check_physical()
    xp = p if isinstance(p, XStateParams) else XStateParams.from_bell(p)
    cond = validate_corner_condition(xp)
    if isinstance(p, BellDiagonalParams):
        entropy = entropy_bell_diagonal(p)
        owid, provenance = owid_bell_diagonal(p), "closed_form"
    else:
        entropy = entropy_x_state(p)
        if cond:
            owid, provenance = owid_x_state(p), "closed_form"
        else:
            owid = max(min_measured_entropy_x_reduced(p, cfg) - entropy, 0.0)
            provenance = "oracle"
    return {
        "command": "compute",
        "params": params_to_json(p),
        "spectrum": p.labelled_spectrum(),
        "entropy": entropy,
        "owid": owid,
        "owid_provenance": provenance,
        "concurrence": concurrence_x_state(p),
        "corner_condition": {"holds": bool(cond), "violations": list(cond.violations)},
    }


def cmd_compute(args):
    _emit(dumps(compute_report(_parse_params(args), _config(args))), args.out)
    return EXIT_OK


def _closed_form_owid(p):
    if isinstance(p, BellDiagonalParams):
        return owid_bell_diagonal(p)
    if p.s == 0.0:
        return owid_bell_diagonal(BellDiagonalParams(p.c1, p.c2, p.c3))
    if validate_corner_condition(p):
        return owid_x_state(p)
    return None


def oracle_report(rho, p=None, cfg=None):
    res = owid_oracle(rho, cfg)
    discord = discord_oracle(rho, cfg)
    report = {
        "command": "oracle",
        "params": params_to_json(p) if p is not None else None,
        "owid": res.value,
        "direction": res.direction,
        "min_measured_entropy": res.min_measured_entropy,
        "state_entropy": res.state_entropy,
        "discord": discord,
        "concurrence": concurrence_oracle(rho),
        "closed_form_owid": None,
        "closed_form_delta": None,
    }
    if p is not None:
        closed = _closed_form_owid(p)
        if closed is not None:
            report["closed_form_owid"] = closed
            report["closed_form_delta"] = res.value - closed
    return report


def cmd_oracle(args):
    cfg = _config(args)
    if args.matrix_file is not None:
        if args.params is not None or args.params_file is not None:
            raise InputError("give state parameters or --matrix-file, not both")
        p, rho = None, _load_matrix(args.matrix_file)
    else:
        p = _parse_params(args)
        rho = _density(p)
    _emit(dumps(oracle_report(rho, p, cfg)), args.out)
    return EXIT_OK


def dynamics_csv(points):
    lines = ["p,owid_bits,concurrence"]
    lines += [f"{fmt_float(pt.p)},{fmt_float(pt.owid)},{fmt_float(pt.concurrence)}" for pt in points]
    return "\n".join(lines) + "\n"


def cmd_dynamics(args):
    p = _parse_params(args)
    grid = parse_p_grid(args.p_grid)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        points = dynamics_trajectory(p, grid, _config(args))
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _emit(dynamics_csv(points), args.out)
    if args.out is not None:
        sys.stdout.write(dumps({"command": "dynamics", "rows": len(points), "out": args.out}))
    return EXIT_OK


def events_report(p):
    return {
        "command": "events",
        "params": params_to_json(p),
        "sudden_death": find_sudden_death(p).to_json(),
        "crossing": find_crossing(p).to_json(),
    }


def cmd_events(args):
    p = _parse_params(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        report = events_report(p)
    for w in {str(w.message) for w in caught}:
        print(f"warning: {w}", file=sys.stderr)
    _emit(dumps(report), args.out)
    return EXIT_OK


def cmd_surface(args):
    if args.out is None:
        raise InputError("surface needs --out")
    fmt = args.format or "csv_points"
    if fmt not in ("csv_points", "obj_mesh"):
        raise InputError(f"surface --format must be csv_points or obj_mesh, got {fmt!r}")
    try:
        spec = SurfaceSpec(args.s, args.target, args.resolution, args.evaluator, args.band)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    sample = sample_level_surface(spec, _config(args))
    written = None
    if sample.empty:
        print(f"warning: {sample.diagnostic}", file=sys.stderr)
    if fmt == "csv_points" or not sample.empty:
        try:
            export_surface(sample, fmt, args.out)
        except OSError as exc:
            raise InputError(str(exc)) from exc
        written = args.out
    sys.stdout.write(dumps({
        "command": "surface",
        "s": spec.s,
        "target": spec.target,
        "resolution": spec.resolution,
        "evaluator": spec.evaluator,
        "band": spec.band,
        "format": fmt,
        "out": written,
        "points": int(len(sample.points)),
        "vertices": int(len(sample.vertices)),
        "triangles": int(len(sample.faces)),
        "superlevel_count": sample.superlevel_count(),
        "empty": sample.empty,
        "diagnostic": sample.diagnostic,
    }))
    return EXIT_OK


# ----------------------------------------------------------------------- parser


def _add_state(p, matrix=False):
    p.add_argument("--family", choices=("bell", "x"), help="state family (inferred from the number count if omitted)")
    p.add_argument("--params", help='JSON {"family", "s", "c": [c1, c2, c3]} or numbers: c1,c2,c3 | s,c1,c2,c3')
    p.add_argument("--params-file", help="file holding the same JSON")
    if matrix:
        p.add_argument("--matrix-file", help="4x4 density matrix: JSON (nested list, [re, im] pairs or {real, imag}) or .npy")


def _add_optimizer(p):
    g = p.add_argument_group("optimizer")
    g.add_argument("--polar-steps", type=int, default=90)
    g.add_argument("--azimuth-steps", type=int, default=180)
    g.add_argument("--refine-iterations", type=int, default=200)
    g.add_argument("--refine-tolerance", type=float, default=1e-12)


def build_parser():
    parser = argparse.ArgumentParser(prog="owid", description="One-way information deficit for two-qubit X states.")
    parser.add_argument("--threads", type=int, default=None, help="upper bound on worker threads")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="closed-form entropy, OWID and concurrence")
    _add_state(p)
    _add_optimizer(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("oracle", help="numerical minimization over measurements")
    _add_state(p, matrix=True)
    _add_optimizer(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("dynamics", help="OWID and concurrence under phase flip (CSV)")
    _add_state(p)
    _add_optimizer(p)
    p.add_argument("--p-grid", default="0:1:0.001", help="start:stop:step or comma list (default 0:1:0.001)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("events", help="sudden death and concurrence/OWID crossing")
    _add_state(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_events)

    p = sub.add_parser("surface", help="constant-OWID surface at fixed s")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--resolution", type=int, default=96)
    p.add_argument("--evaluator", choices=EVALUATORS, default="reduced_oracle")
    p.add_argument("--band", type=float, default=1e-3)
    p.add_argument("--format", choices=("csv_points", "obj_mesh"), default="csv_points")
    _add_optimizer(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_surface)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None:
        if args.threads < 1:
            parser.error("--threads must be >= 1")
        _backend.set_num_threads(args.threads)
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.stdout.write(dumps({
            "command": args.command,
            "converged": False,
            "error": str(exc),
            "best_objective_value": exc.best_value,
            "best_direction": exc.best_direction,
        }))
        return EXIT_NO_CONVERGENCE
    except (InputError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
