"""Command-line entry point: ``hyperqm {verify,scalar,fock,simulate,fields}``.

Exit codes: 0 success, 1 domain or runtime failure (including failed
checks), 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from hyperqm import fock, gauge, verify
from hyperqm.algebra import DimensionError
from hyperqm.scalar_products import PRODUCTS, StateVector, evaluate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def fmt_float(x: float) -> str:
    """17 significant digits; negative zero printed as 0."""
    x = float(x) + 0.0
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    return format(x, ".17g")


def dumps(obj, indent: int | None = 2, _level: int = 0) -> str:
    """JSON with every float written at 17 significant digits.

    ``indent=None`` gives the compact single-line form.
    """
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        parts = [dumps(v, indent, _level + 1) for v in obj]
        flat = all(isinstance(v, (int, float, np.integer, np.floating)) for v in obj)
        if indent is None or flat or not parts:
            return "[" + ("," if indent is None else ", ").join(parts) + "]"
        return _block("[", "]", parts, indent, _level)
    if isinstance(obj, dict):
        parts = [json.dumps(str(k)) + (":" if indent is None else ": ") + dumps(v, indent, _level + 1) for k, v in obj.items()]
        if indent is None or not parts:
            return "{" + ",".join(parts) + "}"
        return _block("{", "}", parts, indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _block(open_: str, close: str, parts: list[str], indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    return open_ + "\n" + ",\n".join(pad + p for p in parts) + "\n" + " " * (indent * level) + close


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


# -- verify -------------------------------------------------------------------


def cmd_verify(args) -> int:
    suites = verify.SUITES if args.suite == "all" else (args.suite,)
    reports = [verify.run_suite(s, seed=args.seed, tol_scale=args.tol) for s in suites]
    for rep in reports:
        for c in rep["checks"]:
            if not c["passed"]:
                print(f"FAIL [{rep['suite']}] {c['name']}: deviation {c['deviation']:.3g} > tol {c['tol']:.3g}", file=sys.stderr)
    if args.format == "csv":
        rows = ["suite,name,passed,deviation,tol"]
        for rep in reports:
            for c in rep["checks"]:
                name = c["name"].replace('"', "'")
                rows.append(f'{rep["suite"]},"{name}",{str(c["passed"]).lower()},{fmt_float(c["deviation"])},{fmt_float(c["tol"])}')
        _emit("\n".join(rows), args.out)
    else:
        body = {"seed": args.seed, "passed": all(r["passed"] for r in reports), "suites": reports}
        _emit(dumps(body), args.out)
    return EXIT_OK if all(r["passed"] for r in reports) else EXIT_FAIL


# -- scalar -------------------------------------------------------------------


def cmd_scalar(args) -> int:
    try:
        f = StateVector.from_json(_read_json(args.file_a))
        g = StateVector.from_json(_read_json(args.file_b))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DimensionError):
            raise
        raise UsageError(f"malformed state file: {exc}") from exc
    value = evaluate(args.product, f, g)
    _emit(dumps(value.to_json(), indent=None), args.out)
    return EXIT_OK


# -- fock ---------------------------------------------------------------------


def cmd_fock(args) -> int:
    basis = fock.FockBasis(args.dim, unit=args.unit, vac2_sign=args.vac2_sign)
    try:
        start = basis.state(args.start)
        ops = [basis.operator(name) for name in args.ops]
    except (ValueError, IndexError) as exc:
        if isinstance(exc, DimensionError):
            raise
        raise UsageError(str(exc)) from exc
    col = fock.apply_sequence(ops, start)
    body = {
        "dim": args.dim,
        "start": args.start,
        "operators": list(args.ops),
        "result": basis.identify(col),
        "column": col.to_json(),
    }
    _emit(dumps(body), args.out)
    return EXIT_OK


# -- simulate -----------------------------------------------------------------


def _particle(cfg: dict, a_dim: int) -> gauge.IsospinParticle:
    p = cfg.get("particle", {})
    iso = p.get("I", [1.0] + [0.0] * (a_dim - 1))
    return gauge.IsospinParticle(
        float(p.get("m", 1.0)),
        float(p.get("g", 1.0)),
        p.get("x", [0.0, 0.0, 0.0]),
        p.get("v", [1.0, 0.0, 0.0]),
        iso,
    )


def _write_csv(traj: gauge.Trajectory, path: str | None) -> None:
    stream = open(path, "w", newline="") if path else sys.stdout
    try:
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(traj.header())
        for row in traj.rows():
            w.writerow([fmt_float(v) for v in row])
    finally:
        if path:
            stream.close()


def _summary(p: gauge.IsospinParticle, traj: gauge.Trajectory, pot: gauge.GaugePotential) -> dict:
    ke = traj.kinetic_energy(p.m)
    norms = traj.isospin_norm()
    out = {
        "steps": len(traj) - 1,
        "dt": traj.dt,
        "a_dim": traj.a_dim,
        "energy_drift_relative": float(np.max(np.abs(ke - ke[0])) / ke[0]) if ke[0] > 0 else float(np.max(np.abs(ke))),
        "isospin_norm_drift": float(np.max(np.abs(norms - norms[0]))),
        "final": {
            "t": float(traj.t[-1]),
            "x": traj.x[-1].tolist(),
            "v": traj.v[-1].tolist(),
            "I": traj.isospin[-1].tolist(),
        },
    }
    if isinstance(pot, gauge.ConstantMagneticPotential):
        b0 = float(np.linalg.norm(pot.b))
        expected = gauge.cyclotron_period(p.m, p.g, b0)
        out["cyclotron"] = {"expected_period": expected}
        try:
            axis = int(np.argmax(np.abs(traj.v[0])))
            measured = gauge.measured_period(traj, axis)
            out["cyclotron"].update(measured_period=measured, relative_error=abs(measured - expected) / expected)
        except gauge.GaugeError:
            pass
    return out


def cmd_simulate(args) -> int:
    cfg = _read_json(args.config)
    try:
        pot = gauge.potential_from_config(cfg, base_dir=Path(args.config).parent)
        p = _particle(cfg, pot.a_dim)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed config: {exc}") from exc
    dt = args.dt if args.dt is not None else cfg.get("dt")
    steps = args.steps if args.steps is not None else cfg.get("steps")
    if dt is None or steps is None:
        raise UsageError("dt and steps must be given on the command line or in the config")
    try:
        traj = gauge.integrate(p, pot, float(dt), int(steps))
    except gauge.NonFiniteStateError as exc:
        if args.out:
            _write_csv(exc.trajectory, args.out)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write_csv(traj, args.out)
    summary = dumps(_summary(p, traj, pot))
    if args.summary:
        Path(args.summary).write_text(summary + "\n")
    elif args.out:
        print(summary)
    return EXIT_OK


# -- fields -------------------------------------------------------------------


def _grid(cfg: dict, h: float | None) -> gauge.GridSpec:
    g = cfg.get("grid", {})
    return gauge.GridSpec(
        g.get("origin", [0.0, 0.0, 0.0]),
        g.get("shape", [5, 5, 5]),
        float(h if h is not None else g.get("h", 0.1)),
        g.get("tau"),
    )


def cmd_fields(args) -> int:
    cfg = _read_json(args.config)
    try:
        pot = gauge.potential_from_config(cfg, base_dir=Path(args.config).parent)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed config: {exc}") from exc
    grid = _grid(cfg, args.h)
    t = args.t if args.t is not None else float(cfg.get("t", 0.0))
    g = float(cfg.get("g", 1.0))
    body = gauge.residual_report(pot, grid, t, g)
    if args.refine:
        fine = gauge.residual_report(pot, grid.refined(), t, g)
        ratios = {}
        for key, coarse in body["residuals"].items():
            f = fine["residuals"][key]["max"]
            ratios[key] = coarse["max"] / f if f > 0 else None
        body = {"coarse": body, "fine": fine, "ratios": ratios}
    _emit(dumps(body), args.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperqm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("verify", parents=[common], help="run identity suites")
    p.add_argument("suite", choices=(*verify.SUITES, "all"))
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=1.0, help="multiply every error tolerance by this factor")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scalar", parents=[common], help="evaluate a scalar product of two state files")
    p.add_argument("product", choices=sorted(PRODUCTS))
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=cmd_scalar)

    p = sub.add_parser("fock", parents=[common], help="apply ladder operators to an occupation state")
    p.add_argument("--dim", type=int, choices=(4, 8), required=True)
    p.add_argument("--start", default="vac1", help="vac1, vac2, occ1:<i> or occ2:<i>")
    p.add_argument("--unit", type=int, default=fock.COMPLEX_UNIT, help="imaginary unit of the projectors")
    p.add_argument("--vac2-sign", type=int, choices=(1, -1), default=1)
    p.add_argument("ops", nargs="*", help="operators a<i> / adag<i>, applied left to right")
    p.set_defaults(func=cmd_fock)

    p = sub.add_parser("simulate", help="integrate a particle trajectory")
    p.add_argument("config")
    p.add_argument("--dt", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--out", help="trajectory CSV path (stdout if omitted)")
    p.add_argument("--summary", help="summary JSON path (stdout when --out is given)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fields", parents=[common], help="field-equation residuals and source densities")
    p.add_argument("config")
    p.add_argument("--h", type=float, help="override grid spacing")
    p.add_argument("--t", type=float, help="evaluation time")
    p.add_argument("--refine", action="store_true", help="also evaluate at h/2 and report ratios")
    p.set_defaults(func=cmd_fields)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DimensionError, gauge.GaugeError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
