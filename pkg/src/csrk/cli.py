"""Command-line surface.

    csrk gen --spec method.json --out tableau.json
    csrk analyze tableau.json [--json]
    csrk integrate tableau.json --problem pendulum --t0 0 --t1 10 --h 0.01 --out run.csv
    csrk order tableau.json --problem pendulum --hs 0.4,0.2,0.1,0.05,0.025 [--t0 --t1]
    csrk reproduce --table 1..7 [--tol 1e-12]

Machine-readable output goes to stdout, human-readable summaries to
stderr.  Exit codes: 0 ok, 2 input error, 3 construction error, 4 solve
error, 5 reproduction mismatch.  CSRK_LOG=debug|info|... sets verbosity.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from . import cstab, orthopoly, tables
from .analyze import analyze_tableau
from .integrate import (InstrumentationLimit, NonConvergence, PROBLEMS, SolverConfig,
                        empirical_order, integrate, invariant_drift, trajectory_csv)
from .quadrature import chebyshev_gauss_lobatto_nodes, gauss_christoffel, interpolatory_rule
from .reduce import WEIGHTED, parse_rk, serialize, to_rk

log = logging.getLogger("csrk")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONSTRUCTION = 3
EXIT_SOLVE = 4
EXIT_MISMATCH = 5


class SpecError(ValueError):
    """Invalid method-spec document; message names the offending field."""


# ---------------------------------------------------------------------------
# method-spec validation

def _require_keys(doc: dict, path: str, required: tuple, optional: tuple = ()):
    if not isinstance(doc, dict):
        raise SpecError(f"{path}: expected an object")
    for key in required:
        if key not in doc:
            raise SpecError(f"{path}.{key}: missing required field")
    for key in doc:
        if key not in required and key not in optional:
            raise SpecError(f"{path}.{key}: unknown field")


def _finite_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"{path}: expected a number")
    value = float(value)
    if not math.isfinite(value):
        raise SpecError(f"{path}: must be finite")
    return value


def _integer(value, path: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecError(f"{path}: expected an integer")
    if minimum is not None and value < minimum:
        raise SpecError(f"{path}: must be >= {minimum}")
    return value


def _index_map(doc: dict, path: str) -> dict:
    out = {}
    if not isinstance(doc, dict):
        raise SpecError(f"{path}: expected an object with 'i,j' keys")
    for key, value in doc.items():
        parts = key.split(",")
        if len(parts) != 2:
            raise SpecError(f"{path}.{key}: key must look like 'i,j'")
        try:
            ij = (int(parts[0]), int(parts[1]))
        except ValueError:
            raise SpecError(f"{path}.{key}: key must look like 'i,j'") from None
        out[ij] = _finite_number(value, f"{path}.{key}")
    return out


def _parse_weight(doc, path="spec.weight") -> orthopoly.Weight:
    _require_keys(doc, path, ("family",), ("alpha", "beta"))
    family = doc["family"]
    if family in orthopoly.NAMED_WEIGHTS:
        for banned in ("alpha", "beta"):
            if banned in doc:
                raise SpecError(f"{path}.{banned}: not allowed with named family {family!r}")
        return orthopoly.NAMED_WEIGHTS[family]()
    if family == "gegenbauer":
        if "alpha" not in doc:
            raise SpecError(f"{path}.alpha: required for gegenbauer")
        if "beta" in doc:
            raise SpecError(f"{path}.beta: not allowed for gegenbauer")
        alpha = _finite_number(doc["alpha"], f"{path}.alpha")
        if alpha <= -1.0:
            raise SpecError(f"{path}.alpha: must exceed -1")
        return orthopoly.gegenbauer(alpha)
    if family == "jacobi":
        for key in ("alpha", "beta"):
            if key not in doc:
                raise SpecError(f"{path}.{key}: required for jacobi")
        alpha = _finite_number(doc["alpha"], f"{path}.alpha")
        beta = _finite_number(doc["beta"], f"{path}.beta")
        if alpha <= -1.0 or beta <= -1.0:
            raise SpecError(f"{path}: alpha and beta must exceed -1")
        return orthopoly.Weight(alpha, beta)
    raise SpecError(
        f"{path}.family: unknown family {family!r}; expected one of "
        f"{sorted(orthopoly.NAMED_WEIGHTS) + ['gegenbauer', 'jacobi']}"
    )


def build_from_spec(doc: dict):
    """Method-spec document -> (ContinuousTableau, QuadratureRule, mode)."""
    _require_keys(doc, "spec", ("weight", "construction", "quadrature"))
    weight = _parse_weight(doc["weight"])
    cons = doc["construction"]
    _require_keys(cons, "spec.construction", ("kind",),
                  ("r", "variant", "eta", "zeta", "extra", "b_level", "b_tail",
                   "skew", "entries", "nodes", "omega", "n_max"))
    quad = doc["quadrature"]
    _require_keys(quad, "spec.quadrature", ("kind",), ("s", "mode", "nodes"))
    mode = quad.get("mode", WEIGHTED)
    if mode not in ("weighted", "unweighted"):
        raise SpecError("spec.quadrature.mode: expected 'weighted' or 'unweighted'")

    kind = cons["kind"]
    n_max_opt = _integer(cons["n_max"], "spec.construction.n_max", 1) if "n_max" in cons else None

    if kind == "truncated":
        r = _integer(cons.get("r"), "spec.construction.r", 1) if "r" in cons else None
        if r is None:
            raise SpecError("spec.construction.r: required for 'truncated'")
        variant = cons.get("variant", cstab.BALANCED)
        if variant not in cstab.VARIANTS:
            raise SpecError(
                f"spec.construction.variant: unknown variant {variant!r}")
        s_hint = _integer(quad.get("s", r), "spec.quadrature.s", 1)
        n_max = n_max_opt or max(r + 1, s_hint, 2)
        basis = orthopoly.build_basis(weight, n_max)
        ct = cstab.truncated_family(basis, r, variant)
    elif kind == "legendre-family":
        if weight.family != "legendre":
            raise SpecError("spec.weight.family: 'legendre-family' needs the legendre weight")
        eta = _integer(cons.get("eta", 0), "spec.construction.eta", 1)
        zeta = _integer(cons.get("zeta", 0), "spec.construction.zeta", 1)
        extra = _index_map(cons.get("extra", {}), "spec.construction.extra")
        ct = cstab.legendre_family(eta, zeta, extra, n_max=n_max_opt)
    elif kind in ("symplectic-skew", "symmetric-skew"):
        level = _integer(cons.get("b_level", 1), "spec.construction.b_level", 1)
        tail = {int(k): _finite_number(v, f"spec.construction.b_tail.{k}")
                for k, v in (cons.get("b_tail", {}) or {}).items()}
        entries = _index_map(cons.get("skew", cons.get("entries", {})),
                             "spec.construction.skew")
        top = max([level - 1, *(max(i, j) for (i, j) in entries)], default=level - 1) if entries \
            else level - 1
        n_max = n_max_opt or max(2 * top + 1, level, 3)
        basis = orthopoly.build_basis(weight, n_max)
        b = cstab.b_series(basis, level, tail)
        builder = cstab.symplectic_skew if kind == "symplectic-skew" else cstab.symmetric_skew
        ct = builder(basis, b, entries)
    elif kind == "collocation":
        if "nodes" not in cons:
            raise SpecError("spec.construction.nodes: required for 'collocation'")
        nodes = [
            _finite_number(v, f"spec.construction.nodes[{i}]")
            for i, v in enumerate(cons["nodes"])
        ]
        if weight.family != "legendre":
            raise SpecError("spec.weight.family: 'collocation' needs the legendre weight")
        from .quadrature import interpolatory_weights
        ct = cstab.hairer_collocation(nodes, interpolatory_weights(weight, nodes))
    elif kind == "chebyshev-symplectic-order2":
        if weight.family != "chebyshev1":
            raise SpecError("spec.weight.family: this preset needs the chebyshev1 weight")
        ct = cstab.chebyshev_symplectic_order2()
    elif kind == "chebyshev-symmetric-family":
        if weight.family != "chebyshev1":
            raise SpecError("spec.weight.family: this preset needs the chebyshev1 weight")
        omega = _finite_number(cons.get("omega", 0.0), "spec.construction.omega")
        ct = cstab.chebyshev_symmetric_family(omega)
    else:
        raise SpecError(f"spec.construction.kind: unknown kind {kind!r}")

    qkind = quad["kind"]
    rule_weight = orthopoly.legendre() if mode == "unweighted" else ct.basis.weight
    if qkind == "gauss":
        s = _integer(quad.get("s", 0), "spec.quadrature.s", 1)
        qbasis = ct.basis if (mode == WEIGHTED and s <= ct.basis.n_max) else \
            orthopoly.build_basis(rule_weight, max(s, 2))
        rule = gauss_christoffel(qbasis, s)
    elif qkind == "lobatto":
        s = _integer(quad.get("s", 0), "spec.quadrature.s", 2)
        rule = interpolatory_rule(rule_weight, chebyshev_gauss_lobatto_nodes(s),
                                  kind="chebyshev-gauss-lobatto")
    elif qkind == "nodes":
        if "nodes" not in quad:
            raise SpecError("spec.quadrature.nodes: required for kind 'nodes'")
        nodes = [
            _finite_number(v, f"spec.quadrature.nodes[{i}]")
            for i, v in enumerate(quad["nodes"])
        ]
        rule = interpolatory_rule(rule_weight, nodes)
    else:
        raise SpecError(f"spec.quadrature.kind: unknown kind {qkind!r}")
    return ct, rule, mode


# ---------------------------------------------------------------------------
# commands

def cmd_gen(args) -> int:
    try:
        with open(args.spec, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        print(f"csrk gen: cannot read spec: {err}", file=sys.stderr)
        return EXIT_INPUT
    try:
        ct, rule, mode = build_from_spec(doc)
    except SpecError as err:
        print(f"csrk gen: invalid spec: {err}", file=sys.stderr)
        return EXIT_INPUT
    try:
        rk = to_rk(ct, rule, mode)
    except (ValueError, RuntimeError) as err:
        print(f"csrk gen: construction failed: {err}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    text = serialize(rk, "json")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    log.info("wrote %s (s=%d)", args.out, rk.s)
    sys.stdout.write(serialize(rk, "markdown"))
    return EXIT_OK


def _load_tableau(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_rk(fh.read())


def cmd_analyze(args) -> int:
    try:
        rk = _load_tableau(args.tableau)
    except (OSError, ValueError, json.JSONDecodeError) as err:
        print(f"csrk analyze: cannot read tableau: {err}", file=sys.stderr)
        return EXIT_INPUT
    report = analyze_tableau(rk)
    sys.stdout.write(json.dumps(report.as_dict(), sort_keys=True) + "\n")
    if not args.json:
        d = report.as_dict()
        print(
            f"stages={rk.s} levels(rho,alpha,beta)=({report.rho},{report.alpha},"
            f"{report.beta}) order>={report.order_bound}", file=sys.stderr)
        print(
            f"symplectic residual {report.symplectic_residual:.3e}   "
            f"symmetric residual {report.symmetric_residual:.3e}", file=sys.stderr)
        print(
            f"stability num {d['stability']['num']} den {d['stability']['den']}  "
            f"A-stable: {report.a_stable}", file=sys.stderr)
    return EXIT_OK


def cmd_integrate(args) -> int:
    try:
        rk = _load_tableau(args.tableau)
    except (OSError, ValueError, json.JSONDecodeError) as err:
        print(f"csrk integrate: cannot read tableau: {err}", file=sys.stderr)
        return EXIT_INPUT
    if args.problem not in PROBLEMS:
        print(f"csrk integrate: unknown problem {args.problem!r}; "
              f"expected one of {sorted(PROBLEMS)}", file=sys.stderr)
        return EXIT_INPUT
    problem = PROBLEMS[args.problem]()
    try:
        traj = integrate(rk, problem, args.t0, args.t1, args.h,
                         SolverConfig(tol=args.tol))
    except ValueError as err:
        print(f"csrk integrate: {err}", file=sys.stderr)
        return EXIT_INPUT
    except NonConvergence as err:
        print(f"csrk integrate: stage solve failed at step {err.step_index}: {err}",
              file=sys.stderr)
        return EXIT_SOLVE
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(trajectory_csv(traj, problem))
    summary = f"steps={len(traj.times) - 1}"
    if problem.exact is not None:
        err_final = float(np.linalg.norm(traj.final - problem.exact(args.t1 - args.t0)))
        summary += f" final_error={err_final:.6e}"
    if problem.hamiltonian is not None:
        drift = invariant_drift(traj, problem)
        summary += f" invariant_drift={drift.max_drift:.6e}"
    print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_order(args) -> int:
    try:
        rk = _load_tableau(args.tableau)
    except (OSError, ValueError, json.JSONDecodeError) as err:
        print(f"csrk order: cannot read tableau: {err}", file=sys.stderr)
        return EXIT_INPUT
    if args.problem not in PROBLEMS:
        print(f"csrk order: unknown problem {args.problem!r}", file=sys.stderr)
        return EXIT_INPUT
    try:
        hs = [float(v) for v in args.hs.split(",") if v]
    except ValueError:
        print("csrk order: --hs must be a comma-separated list of step sizes",
              file=sys.stderr)
        return EXIT_INPUT
    problem = PROBLEMS[args.problem]()
    try:
        est = empirical_order(rk, problem, (args.t0, args.t1), hs)
    except (ValueError, InstrumentationLimit) as err:
        print(f"csrk order: {err}", file=sys.stderr)
        return EXIT_INPUT
    except NonConvergence as err:
        print(f"csrk order: stage solve failed: {err}", file=sys.stderr)
        return EXIT_SOLVE
    sys.stdout.write(json.dumps({
        "slope": est.slope, "pair_slopes": est.pair_slopes,
        "hs": est.hs, "errors": est.errors, "reference": est.reference,
    }, sort_keys=True) + "\n")
    print(f"slope {est.slope:.3f} (pairs {['%.3f' % v for v in est.pair_slopes]})",
          file=sys.stderr)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    if not 1 <= args.table <= 7:
        print("csrk reproduce: --table must be 1..7", file=sys.stderr)
        return EXIT_INPUT
    report = tables.reproduce(args.table, tol=args.tol)
    for case in report.cases:
        status = "ok" if case.passed else "MISMATCH"
        print(f"group {args.table} {case.name}: max diff {case.max_diff:.3e} [{status}]",
              file=sys.stderr)
        if not case.passed:
            for fieldname, idx, got, expected in case.entry_diffs:
                print(f"  {fieldname}{list(idx)}: got {got!r} expected {expected!r}",
                      file=sys.stderr)
    sys.stdout.write(json.dumps({
        "table": args.table, "tol": report.tol, "passed": report.passed,
        "max_diff": max(c.max_diff for c in report.cases),
    }, sort_keys=True) + "\n")
    return EXIT_OK if report.passed else EXIT_MISMATCH


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csrk",
        description="Runge-Kutta methods from weighted orthogonal polynomials",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="build a tableau from a method-spec file")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", help="levels, residuals, stability of a tableau file")
    p.add_argument("tableau")
    p.add_argument("--json", action="store_true", help="machine output only")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("integrate", help="run a tableau on a test problem")
    p.add_argument("tableau")
    p.add_argument("--problem", required=True)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tol", type=float, default=1e-13)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("order", help="empirical convergence order on a test problem")
    p.add_argument("tableau")
    p.add_argument("--problem", required=True)
    p.add_argument("--hs", required=True, help="comma-separated step sizes")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=3.2)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("reproduce", help="check a built-in reference group")
    p.add_argument("--table", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("CSRK_LOG", "warning").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.WARNING),
                        format="csrk %(levelname)s: %(message)s")
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
