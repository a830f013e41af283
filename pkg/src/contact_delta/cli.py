"""Command-line front end.

Exit codes: 0 success, 1 a check or certificate failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from contextlib import contextmanager

import numpy as np

from . import models
from .curvature import delta_gaps
from .flow import FlowState, integrate_remark
from .models import Kind, ModelSpec, Space
from .numerics import TOL, InvalidInputError
from .symbolic.certificates import CHECKS, run_checks

DEFAULT_SEED = 0xDE17A
VIOLATION_TOL = -1e-9

MODEL_NAMES = {
    Space.CH: {
        "A0": Kind.A0, "horosphere": Kind.A0,
        "A1-0": Kind.A1_0, "A1_0": Kind.A1_0, "geodesic-sphere": Kind.A1_0,
        "A1-1": Kind.A1_1, "A1_1": Kind.A1_1,
        "A2": Kind.A2,
        "B": Kind.B,
    },
    Space.CP: {
        "geodesic-sphere": Kind.CP_GEODESIC_SPHERE,
        "B-tube": Kind.CP_TYPE_B_TUBE, "B": Kind.CP_TYPE_B_TUBE, "quadric-tube": Kind.CP_TYPE_B_TUBE,
    },
}


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


@contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_json(obj, path):
    with _sink(path) as out:
        out.write(json.dumps(obj, indent=2) + "\n")


def _emit_csv(header, rows, path, trailer=None):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (int, float, np.number)) and not isinstance(v, bool) else v
                    for v in row])
    if trailer:
        buf.write(trailer + "\n")
    with _sink(path) as out:
        out.write(buf.getvalue())


def _space(name: str) -> Space:
    try:
        return Space[name.upper()]
    except KeyError:
        raise UsageError(f"unknown space {name!r}; use CP or CH")


def _kind(space: Space, name: str) -> Kind:
    try:
        return MODEL_NAMES[space][name]
    except KeyError:
        choices = ", ".join(sorted(MODEL_NAMES[space]))
        raise UsageError(f"model {name!r} is not available in {space.name}; choose from {choices}")


def _spec(args) -> ModelSpec:
    space = _space(args.space)
    kind = _kind(space, args.model)
    return ModelSpec(space, kind, args.n, args.radius, args.k)


def cmd_ideal_check(args) -> int:
    rep = models.classify_ideal(_spec(args), args.tol)
    obj = rep.to_json()
    if args.format == "csv":
        _emit_csv(list(obj), [[obj[k] if not isinstance(obj[k], bool) else str(obj[k]).lower() for k in obj]],
                  args.output)
    else:
        _emit_json(obj, args.output)
    return 0


def cmd_solve_radius(args) -> int:
    space = _space(args.space)
    kind = _kind(space, args.model)
    ModelSpec(space, kind, args.n, None if kind is Kind.A0 else 0.1, args.k)  # validates flags
    sols = models.ideal_radii(space, kind, args.n)
    rows = [{"radius": s.radius, "condition": s.condition, "residual": s.residual,
             "closed_form": s.closed_form, "closed_form_error": s.closed_form_error} for s in sols]
    if args.format == "csv":
        _emit_csv(["radius", "condition", "residual", "closed_form", "closed_form_error"],
                  [[r[k] if r[k] is not None else "" for k in r] for r in rows], args.output)
    else:
        _emit_json({"space": space.name, "model": kind.value, "n": args.n, "roots": rows}, args.output)
    return 0


def cmd_flow(args) -> int:
    if args.beta0 == 0:
        raise UsageError("--beta0 must be nonzero")
    traj = integrate_remark(FlowState(0.0, args.alpha0, args.beta0, args.gamma0), args.c, args.s_max, args.h)
    rows = [st.as_row() for st in traj.states]
    if args.format == "json":
        _emit_json({"columns": ["s", "alpha", "beta", "gamma", "mu"], "rows": rows, "halt": traj.halt},
                   args.output)
    else:
        _emit_csv(["s", "alpha", "beta", "gamma", "mu"], rows, args.output,
                  f"# halt: {traj.halt}" if traj.halt else None)
    return 0


def cmd_verify_symbolic(args) -> int:
    names = None if "all" in args.check else args.check
    certs = run_checks(names)
    _emit_json([c.to_json() for c in certs], args.output)
    return 0 if all(c.passed for c in certs) else 1


def cmd_sweep(args) -> int:
    space = _space(args.space)
    kind = _kind(space, args.model)
    if kind is Kind.A0:
        raise UsageError("horospheres have no radius to sweep")
    if args.steps < 1 or not args.r_min < args.r_max:
        raise UsageError("need --r-min < --r-max and --steps >= 1")
    radii = models.radius_grid(space, kind, args.r_min, args.r_max, args.steps)
    ModelSpec(space, kind, args.n, float(radii[0]), args.k)
    ModelSpec(space, kind, args.n, float(radii[-1]), args.k)
    gaps = models.sweep_gaps(space, kind, args.n, radii, args.k)
    rows = list(zip(radii.tolist(), gaps.tolist()))
    if args.format == "json":
        _emit_json({"r": radii.tolist(), "gap": gaps.tolist()}, args.output)
    else:
        _emit_csv(["r", "gap"], rows, args.output)
    return 0


def random_shape_operators(n: int, samples: int, seed: int) -> np.ndarray:
    """Symmetric operators with entries uniform on [-2, 2]; sample i draws from
    its own stream seeded with ``seed ^ i`` so any subset is reproducible."""
    m = 2 * n - 1
    il = np.tril_indices(m)
    out = np.zeros((samples, m, m))
    for i in range(samples):
        rng = np.random.default_rng(seed ^ i)
        vals = rng.uniform(-2.0, 2.0, size=len(il[0]))
        out[i][il] = vals
        out[i][il[1], il[0]] = vals
    return out


def audit(n: int, samples: int, seed: int, cs=(-1, 1)) -> dict:
    ops = random_shape_operators(n, samples, seed)
    per_c = {}
    for c in cs:
        g = delta_gaps(ops, n, c)
        per_c[str(c)] = {"min_gap": float(g.min()), "violations": int(np.sum(g < VIOLATION_TOL)),
                         "argmin": int(g.argmin())}
    return {
        "n": n, "samples": samples, "seed": seed,
        "min_gap": min(v["min_gap"] for v in per_c.values()),
        "violations": sum(v["violations"] for v in per_c.values()),
        "by_c": per_c,
    }


def cmd_random_audit(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    cs = (-1, 1) if args.c == "both" else (int(args.c),)
    rep = audit(args.n, args.samples, args.seed, cs)
    if args.format == "csv":
        _emit_csv(["c", "min_gap", "violations"],
                  [[c, v["min_gap"], v["violations"]] for c, v in rep["by_c"].items()], args.output)
    else:
        _emit_json(rep, args.output)
    return 1 if rep["violations"] else 0


def _space_model(p, model_required=True):
    p.add_argument("--space", required=True, help="CP or CH")
    p.add_argument("--model", required=model_required,
                   help="CH: A0, A1-0, A1-1, A2, B; CP: geodesic-sphere, B-tube")
    p.add_argument("--n", type=int, default=2, help="complex dimension (default 2)")
    p.add_argument("--k", type=int, default=None, help="complex dimension of the core for type A2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="contact-delta",
                                     description="delta^c(2) checks for real hypersurfaces in complex space forms")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ideal-check", help="report tau, inf K(xi), delta, bound and gap for a Hopf model")
    _space_model(p)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--tol", type=float, default=TOL.ideal_gap)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_ideal_check)

    p = sub.add_parser("solve-radius", help="radii at which a model family becomes ideal")
    _space_model(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_solve_radius)

    p = sub.add_parser("flow", help="integrate the non-Hopf structure ODE system to CSV")
    p.add_argument("--c", type=float, required=True, choices=[-1.0, 1.0])
    p.add_argument("--alpha0", type=float, default=0.0)
    p.add_argument("--beta0", type=float, required=True)
    p.add_argument("--gamma0", type=float, default=0.0)
    p.add_argument("--s-max", type=float, default=1.0)
    p.add_argument("--h", type=float, default=TOL.flow_step)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("verify-symbolic", help="exact certificates for the elimination steps")
    p.add_argument("--check", action="append", choices=list(CHECKS) + ["all"], default=None,
                   help="repeatable; default all")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_verify_symbolic)

    p = sub.add_parser("sweep", help="inequality gap along a radius grid (CSV r,gap)")
    _space_model(p)
    p.add_argument("--r-min", type=float, required=True)
    p.add_argument("--r-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("random-audit", help="check the inequality on random shape operators")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--c", choices=["-1", "1", "both"], default="both")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_random_audit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "check", None) is None and args.command == "verify-symbolic":
        args.check = ["all"]
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, InvalidInputError) as exc:
        parser.exit(2, f"{parser.prog}: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
