"""Collapse a continuous tableau to a standard Butcher tableau, and (de)serialize.

Reduction evaluates the kernel at the nodes of a quadrature rule:

    weighted mode   (rule built under the tableau's own weight):
        a_ij = b_j Ahat(c_i, c_j),      b_i = b_i Bhat(c_i)
    unweighted mode (rule built under the flat weight, applied to the full
    integrand):
        a_ij = b_j Ahat(c_i, c_j) w(c_j),  b_i = b_i Bhat(c_i) w(c_i)

Both modes preserve kernel-level symplecticity; mirror-symmetric rules
preserve symmetry.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .cstab import ContinuousTableau
from .quadrature import QuadratureRule

WEIGHTED = "weighted"
UNWEIGHTED = "unweighted"


@dataclass
class RKTableau:
    """Standard s-stage Butcher tableau (A, b, c) with provenance."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.b = np.asarray(self.b, dtype=float).ravel()
        self.c = np.asarray(self.c, dtype=float).ravel()
        s = len(self.c)
        if self.A.shape != (s, s) or len(self.b) != s:
            raise ValueError(f"inconsistent tableau shapes: A{self.A.shape}, b{self.b.shape}, c{self.c.shape}")
        if np.any(np.diff(self.c) <= 0.0):
            raise ValueError("abscissae must be strictly increasing")
        if np.any(self.c < 0.0) or np.any(self.c > 1.0):
            raise ValueError("abscissae must lie in [0, 1]")

    @property
    def s(self) -> int:
        return len(self.c)

    def close_to(self, other: "RKTableau", tol: float = 1e-12) -> bool:
        return (
            self.s == other.s
            and float(np.max(np.abs(self.A - other.A))) <= tol
            and float(np.max(np.abs(self.b - other.b))) <= tol
            and float(np.max(np.abs(self.c - other.c))) <= tol
        )


def to_rk(ct: ContinuousTableau, rule: QuadratureRule, mode: str = WEIGHTED) -> RKTableau:
    """Reduce a continuous tableau with a quadrature rule."""
    if mode not in (WEIGHTED, UNWEIGHTED):
        raise ValueError(f"mode must be '{WEIGHTED}' or '{UNWEIGHTED}'")
    w = ct.basis.weight
    if mode == WEIGHTED:
        if not rule.weight.same_as(w):
            raise ValueError(
                f"weighted reduction needs a rule under the tableau weight "
                f"(alpha={w.alpha}, beta={w.beta}); rule has "
                f"(alpha={rule.weight.alpha}, beta={rule.weight.beta})"
            )
        wvals = np.ones(rule.s)
    else:
        if not (rule.weight.alpha == 0.0 and rule.weight.beta == 0.0):
            raise ValueError("unweighted reduction needs a rule built under the flat weight")
        wvals = np.asarray(w.value(rule.nodes), dtype=float)

    c = rule.nodes
    A = ct.a_smooth(c[:, None], c[None, :]) * (rule.weights * wvals)[None, :]
    b = rule.weights * ct.b_smooth(c) * wvals
    rk = RKTableau(A, b, c, provenance={
        "source": dict(ct.provenance),
        "quadrature": rule.as_dict(),
        "mode": mode,
    })
    # a consistent kernel with an adequate rule must reproduce row sums = c
    if ct.consistency_residual() <= 1e-10 and rule.order > ct.degree_a_sigma:
        rowsum = np.max(np.abs(A.sum(axis=1) - c))
        if rowsum > 1e-10:
            raise RuntimeError(
                f"row-sum consistency lost in reduction (residual {rowsum:.2e}); "
                "tableau or rule data corrupted"
            )
    return rk


# ---------------------------------------------------------------------------
# serialization

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def serialize(rk: RKTableau, fmt: str = "json") -> str:
    """Render a tableau as JSON (bit-stable), Markdown, or LaTeX."""
    if fmt == "json":
        return _to_json(rk)
    if fmt == "markdown":
        return _to_markdown(rk)
    if fmt == "latex":
        return _to_latex(rk)
    raise ValueError(f"unknown format {fmt!r}; expected json, markdown or latex")


def _to_json(rk: RKTableau) -> str:
    # fixed field order, floats at 17 significant digits (exact round-trip)
    parts = ['{\n  "s": %d,\n' % rk.s]
    parts.append('  "A": [%s],\n' % ", ".join(
        "[" + ", ".join(_fmt(v) for v in row) + "]" for row in rk.A))
    parts.append('  "b": [%s],\n' % ", ".join(_fmt(v) for v in rk.b))
    parts.append('  "c": [%s],\n' % ", ".join(_fmt(v) for v in rk.c))
    parts.append('  "provenance": %s\n}' % json.dumps(rk.provenance, sort_keys=True))
    return "".join(parts)


def parse_rk(text: str) -> RKTableau:
    doc = json.loads(text)
    for key in ("A", "b", "c"):
        if key not in doc:
            raise ValueError(f"tableau document missing field {key!r}")
    rk = RKTableau(np.array(doc["A"], dtype=float), np.array(doc["b"], dtype=float),
                   np.array(doc["c"], dtype=float), provenance=doc.get("provenance", {}))
    if "s" in doc and int(doc["s"]) != rk.s:
        raise ValueError("field 's' disagrees with the tableau size")
    return rk


def _to_markdown(rk: RKTableau, digits: int = 12) -> str:
    def f(x):
        return format(float(x), f".{digits}g")

    rows = []
    for i in range(rk.s):
        rows.append("| " + f(rk.c[i]) + " | " + " | ".join(f(v) for v in rk.A[i]) + " |")
    sep = "|---" * (rk.s + 1) + "|"
    rows.insert(1, sep) if rk.s > 0 else None
    rows.append("| | " + " | ".join(f(v) for v in rk.b) + " |")
    return "\n".join(rows) + "\n"


def _to_latex(rk: RKTableau, digits: int = 12) -> str:
    def f(x):
        return format(float(x), f".{digits}g")

    lines = ["\\begin{array}{c|" + "c" * rk.s + "}"]
    for i in range(rk.s):
        lines.append(f(rk.c[i]) + " & " + " & ".join(f(v) for v in rk.A[i]) + r" \\")
    lines.append("\\hline")
    lines.append(" & " + " & ".join(f(v) for v in rk.b))
    lines.append("\\end{array}")
    return "\n".join(lines) + "\n"
