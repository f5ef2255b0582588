"""solgeo command-line interface.

Every subcommand takes its inputs from flags, from a JSON ``--manifest``, or
both (flags win). Output goes to stdout as JSON (default) or CSV; the
environment variable SOLGEO_FORMAT changes the default. Exit status is 0 on
success, 2 for invalid input and 3 for numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import census as cen
from .cz_index import (
    bott_perturbed_index,
    cz_index_path,
    generated_path,
    hyperbolic_path,
    morse_bott_type_A,
    rotation_path,
)
from .curve_combinatorics import curve_from_dict, exhaustive_filter, freedom_budget, is_string_like, load_curve
from .errors import NumericalError, SolGeoError, ValidationError
from .geodesic_flow import DEFAULT_TOL, GeodesicType, classify, exact_initial_state, flow
from .lattice_manifolds import build_manifold, fiber_translation_group_order, homology
from .linearized_flow import monodromy
from .manifest import Manifest, parse_manifest
from .sol_core import SQRT2, PhaseState, SolElement

FORMATS = ("json", "csv")


# --- argument helpers ---------------------------------------------------------


def parse_int_matrix(text: str) -> list:
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise ValidationError(f"matrix {text!r}: expected four comma-separated integers") from None
    if len(vals) != 4:
        raise ValidationError(f"matrix {text!r}: expected four comma-separated integers")
    return [vals[:2], vals[2:]]


def parse_floats(text: str, count: int, what: str) -> list:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise ValidationError(f"{what} {text!r}: expected {count} comma-separated numbers") from None
    if len(vals) != count:
        raise ValidationError(f"{what} {text!r}: expected {count} comma-separated numbers")
    return vals


def parse_classes(text: str) -> list:
    out = []
    for chunk in text.split(";"):
        parts = chunk.split(",")
        try:
            out.append([int(p) for p in parts])
        except ValueError:
            raise ValidationError(f"class {chunk!r}: expected m,n") from None
        if len(parts) != 2:
            raise ValidationError(f"class {chunk!r}: expected m,n")
    return out


class Inputs:
    """Flag values layered over manifest values over defaults."""

    def __init__(self, args: argparse.Namespace, manifest: Optional[Manifest]):
        self.args = args
        self.manifest = manifest

    def get(self, key: str, default=None, convert=None):
        val = getattr(self.args, key, None)
        if val is not None:
            return convert(val) if convert else val
        if self.manifest is not None and key in self.manifest:
            return self.manifest.get(key)
        return default

    def require(self, key: str, convert=None):
        val = self.get(key, convert=convert)
        if val is None:
            raise ValidationError(f"missing required input --{key.replace('_', '-')}")
        return val


# --- output -----------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def emit(out, fmt: str, payload: dict, table: Optional[tuple] = None):
    """Write ``payload`` as JSON, or ``table`` = (header, rows) as CSV.

    Without a table, CSV output is a two-column key,value listing.
    """
    if fmt == "json":
        json.dump(_jsonable(payload), out, indent=2)
        out.write("\n")
        return
    w = csv.writer(out, lineterminator="\n")
    if table is None:
        w.writerow(["key", "value"])
        for k, v in payload.items():
            v = _jsonable(v)
            w.writerow([k, json.dumps(v) if isinstance(v, (list, dict)) else v])
        return
    header, rows = table
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else _jsonable(v) for v in r])


# --- state construction ---------------------------------------------------


def _state(inp: Inputs) -> PhaseState:
    kind = inp.get("geodesic")
    if inp.args.position is None and (inp.manifest is None or "state" not in inp.manifest):
        if kind is None:
            raise ValidationError("give --position with --momentum or --velocity, or --geodesic A|B")
        gt = GeodesicType("A", branch="f2") if kind == "A" else GeodesicType("B", leaf="vertical")
        return exact_initial_state(gt)
    mstate = inp.manifest.get("state", {}) if inp.manifest is not None else {}
    pos = parse_floats(inp.args.position, 3, "position") if inp.args.position else mstate["position"]
    mom = parse_floats(inp.args.momentum, 3, "momentum") if inp.args.momentum else mstate.get("momentum")
    vel = parse_floats(inp.args.velocity, 3, "velocity") if inp.args.velocity else mstate.get("velocity")
    if (mom is None) == (vel is None):
        raise ValidationError("give exactly one of momentum or velocity")
    q = SolElement.from_array(pos)
    st = PhaseState(q, mom) if mom is not None else PhaseState.from_velocity(q, vel)
    return st.normalize() if inp.get("normalize", False) else st


def _manifold(inp: Inputs):
    return build_manifold(inp.require("matrix", parse_int_matrix), inp.get("scale", 1.0), inp.get("kind", "suspension"))


# --- subcommands -------------------------------------------------------------


def cmd_homology(inp: Inputs, out, fmt):
    M = _manifold(inp)
    rep = homology(M)
    payload = dict(rep.as_strings())
    payload["torsion_order"] = rep.torsion_order
    payload["fiber_translations"] = fiber_translation_group_order(M)
    payload["lambda"] = M.monodromy.lam
    payload["signs"] = [M.monodromy.eps1, M.monodromy.eps2]
    emit(out, fmt, payload)


def cmd_census(inp: Inputs, out, fmt):
    M = _manifold(inp)
    types = inp.get("types", "A")
    rows = []
    if "A" in types:
        rows += cen.type_A_census(M, inp.get("cutoff", 6.0), jobs=inp.get("jobs", 1))
    if "B" in types:
        rows += cen.type_B_census(M, inp.get("max_period", 3))
    rows.sort(key=lambda g: g.length)
    if fmt == "csv":
        cen.write_csv(rows, out)
        return
    payload = {
        "summary": cen.length_summary(rows, inp.get("bucket", 1.0)),
        "geodesics": [r.csv_row() | {"branch": r.branch} if r.type == "A" else r.csv_row() for r in rows],
    }
    emit(out, fmt, payload)


def cmd_periodic(inp: Inputs, out, fmt):
    A = inp.require("matrix", parse_int_matrix)
    n = inp.require("n")
    pts = cen.enumerate_periodic_points(A, n)
    count = cen.type_B_count(A, n)
    if len(pts) != count:
        raise NumericalError("enumeration disagrees with |det(A^n - I)|")
    payload = {"count": count, "points": [[str(x), str(y)] for x, y in pts]}
    emit(out, fmt, payload, (["x", "y"], [[str(x), str(y)] for x, y in pts]))


def cmd_flow(inp: Inputs, out, fmt):
    st = _state(inp)
    T = float(inp.get("time", 1.0))
    samples = inp.get("samples", 101)
    tol = inp.get("tol", DEFAULT_TOL)
    traj = flow(st, T, tol, t_eval=np.linspace(0.0, T, samples) if T != 0 else None)
    try:
        kind = str(classify(st))
    except ValidationError:
        kind = None
    header = ["t", "x", "y", "z", "px", "py", "pz", "H"]
    rows = traj.rows().tolist()
    drift = float(np.max(np.abs(traj.energy - traj.energy[0])))
    emit(out, fmt, {"type": kind, "energy_drift": drift, "columns": header, "rows": rows}, (header, rows))


def cmd_monodromy(inp: Inputs, out, fmt):
    st = _state(inp)
    T = float(inp.require("time"))
    mono = monodromy(st, T, inp.get("tol", DEFAULT_TOL))
    ev = mono.eigenvalues
    payload = {
        "time": T,
        "trace": mono.trace,
        "determinant": mono.determinant,
        "eigenvalues": [[float(e.real), float(e.imag)] for e in sorted(ev, key=lambda e: (e.real, e.imag))],
        "symplectic_defect": mono.symplectic_defect(),
    }
    kind = inp.get("geodesic")
    if kind == "A":
        payload["expected_trace"] = 4 + 2 * math.cos(SQRT2 * T)
    elif kind == "B":
        payload["expected_trace"] = 2 + 4 * math.cosh(T)
    emit(out, fmt, payload)


def cmd_index(inp: Inputs, out, fmt):
    length = inp.get("length")
    if length is not None:
        emit(out, fmt, {"length": length, "index": morse_bott_type_A(float(length))})
        return
    T = float(inp.require("time"))
    S = inp.get("S", convert=lambda s: np.reshape(parse_floats(s, 4, "S"), (2, 2)).tolist())
    path = inp.get("path", "generated" if S is not None else None)
    if path is None:
        raise ValidationError("give --length, --path or --S")
    if path == "generated":
        if S is None:
            raise ValidationError("--path generated needs --S")
        delta = inp.get("delta")
        if delta is not None:
            payload = {"path": "bott", "S": S, "time": T, "index": bott_perturbed_index(S, T, float(delta))}
            emit(out, fmt, payload)
            return
        p = generated_path(S, T)
    else:
        p = rotation_path(T) if path == "rotation" else hyperbolic_path(T)
    res = cz_index_path(p)
    payload = {"path": path, "time": T} | res.as_dict()
    emit(out, fmt, payload, (["t", "sign"], res.crossings) if fmt == "csv" else None)


def cmd_verify_bound(inp: Inputs, out, fmt):
    scan = cen.elliptic_bound_scan(inp.get("grid", 100_001), inp.get("tol", 1e-10))
    emit(out, fmt, scan.as_dict())
    if not scan.holds:
        raise NumericalError("elliptic bound violated on the grid")


def cmd_curve(inp: Inputs, out, fmt):
    max_n = getattr(inp.args, "exhaustive", None)
    if max_n is not None:
        r = exhaustive_filter(max_n)
        emit(
            out,
            fmt,
            {"examined": r.examined, "admissible": r.admissible, "conclusion_holds": r.conclusion_holds, "holds": r.holds},
        )
        return
    if inp.args.tree is not None:
        tree = load_curve(inp.args.tree)
    elif inp.manifest is not None and "tree" in inp.manifest:
        tree = curve_from_dict(inp.manifest.get("tree"))
    else:
        raise ValidationError("missing required input --tree")
    rep = freedom_budget(tree)
    emit(out, fmt, {"string_like": is_string_like(tree)} | rep.as_dict())


def cmd_choose_scale(inp: Inputs, out, fmt):
    M = _manifold(inp)
    classes = inp.require("classes", parse_classes)
    eps = cen.choose_scale(M, classes)
    scaled = build_manifold(M.monodromy.A, eps, M.kind)
    rows = [cen.closed_geodesic_A(c, scaled.eigencoordinates(c)) for c in classes]
    payload = {
        "epsilon": eps,
        "floor": cen.FLOOR,
        "classes": [{"class": list(g.lattice_class), "length": g.length, "index": g.morse_bott_index} for g in rows],
    }
    emit(out, fmt, payload)


COMMANDS = {
    "homology": cmd_homology,
    "census": cmd_census,
    "periodic": cmd_periodic,
    "flow": cmd_flow,
    "monodromy": cmd_monodromy,
    "index": cmd_index,
    "verify-bound": cmd_verify_bound,
    "curve": cmd_curve,
    "choose-scale": cmd_choose_scale,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None, help="output format (default json, or $SOLGEO_FORMAT)")
    common.add_argument("--manifest", default=None, help="JSON file with inputs; flags take precedence")

    matrix = argparse.ArgumentParser(add_help=False)
    matrix.add_argument("--matrix", default=None, help="row-major 2x2 integers, e.g. 2,1,1,1")
    matrix.add_argument("--scale", type=float, default=None)
    matrix.add_argument("--kind", choices=["suspension", "sapphire"], default=None)

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--position", default=None, help="x,y,z")
    state.add_argument("--momentum", default=None, help="px,py,pz")
    state.add_argument("--velocity", default=None, help="xdot,ydot,zdot")
    state.add_argument("--geodesic", choices=["A", "B"], default=None, help="reference geodesic through the origin")
    state.add_argument("--normalize", action="store_true", default=None)
    state.add_argument("--time", type=float, default=None)
    state.add_argument("--tol", type=float, default=None)

    p = argparse.ArgumentParser(prog="solgeo", description="Geodesics and closed Sol manifolds.")
    sub = p.add_subparsers(dest="command", metavar="command")

    sub.add_parser("homology", parents=[common, matrix], help="integral homology of a suspension")

    s = sub.add_parser("census", parents=[common, matrix], help="closed geodesics up to a length")
    s.add_argument("--cutoff", type=float, default=None)
    s.add_argument("--types", choices=["A", "B", "AB"], default=None)
    s.add_argument("--max-period", dest="max_period", type=int, default=None)
    s.add_argument("--bucket", type=float, default=None)
    s.add_argument("--jobs", type=int, default=None)

    s = sub.add_parser("periodic", parents=[common], help="fixed points of A^n on the torus")
    s.add_argument("--matrix", default=None)
    s.add_argument("--n", type=int, default=None)

    s = sub.add_parser("flow", parents=[common, state], help="sample the geodesic flow")
    s.add_argument("--samples", type=int, default=None)

    sub.add_parser("monodromy", parents=[common, state], help="linearized flow along a geodesic")

    s = sub.add_parser("index", parents=[common], help="Conley-Zehnder and Morse-Bott indices")
    s.add_argument("--length", type=float, default=None)
    s.add_argument("--path", choices=["rotation", "hyperbolic", "generated"], default=None)
    s.add_argument("--S", default=None, help="symmetric generator a,b,b,c")
    s.add_argument("--delta", type=float, default=None)
    s.add_argument("--time", type=float, default=None)

    s = sub.add_parser("verify-bound", parents=[common], help="scan the elliptic length floor")
    s.add_argument("--grid", type=int, default=None)
    s.add_argument("--tol", type=float, default=None)

    s = sub.add_parser("curve", parents=[common], help="index budget of a nodal curve tree")
    s.add_argument("--tree", default=None, help="JSON tree file")
    s.add_argument("--exhaustive", type=int, default=None, help="run the filter over trees with up to N components")

    s = sub.add_parser("choose-scale", parents=[common, matrix], help="metric scale for a set of classes")
    s.add_argument("--classes", default=None, help="m,n;m,n;...")
    return p


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(err)
        return 2
    fmt = args.format or os.environ.get("SOLGEO_FORMAT", "json")
    if fmt not in FORMATS:
        print(f"error: SOLGEO_FORMAT must be one of {FORMATS}", file=err)
        return 2
    buf = io.StringIO()
    try:
        manifest = parse_manifest(args.manifest) if args.manifest else None
        COMMANDS[args.command](Inputs(args, manifest), buf, fmt)
    except ValidationError as exc:
        out.write(buf.getvalue())
        print(f"error: {exc}", file=err)
        return 2
    except (NumericalError, OverflowError, ArithmeticError) as exc:
        out.write(buf.getvalue())
        print(f"numerical failure: {exc}", file=err)
        return 3
    except SolGeoError as exc:
        print(f"error: {exc}", file=err)
        return 2
    out.write(buf.getvalue())
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
