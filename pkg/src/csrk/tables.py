"""Built-in reference tableaux and their construction recipes.

Seven groups of reference methods, each stored twice: golden entries in
exact surd form (derived symbolically from the construction definitions,
evaluated here in double precision) and a builder that regenerates the
tableau through the library pipeline.  `reproduce` diffs the two.

Groups:
  1  flat-weight truncations reduced on Chebyshev-Gauss-Lobatto abscissae
     (plain interpolatory weights); A-stable, orders 2, 4, 4
  2  degree-2 truncations of the three linear-weight families, 2-point
     Gauss-Christoffel; order 2
  3  w = 4x(1-x) truncations r = 1, 2, 3, r-point Gauss-Christoffel;
     orders 2, 2, 4
  4  Chebyshev (first kind) truncations r = 1, 2, 3; orders 2, 2, 4
  5  Chebyshev (second kind) truncations r = 1, 2, 3; orders 2, 2, 4
  6  order-2 symplectic pair on the first-kind Chebyshev weight
  7  one-parameter 3-stage order-4 symplectic+symmetric family (parameter
     omega enters the entries affinely)
"""
from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from . import cstab, orthopoly
from .quadrature import chebyshev_gauss_lobatto_nodes, gauss_christoffel, interpolatory_rule
from .reduce import RKTableau, to_rk

S2, S3, S5, S6, S21 = sqrt(2.0), sqrt(3.0), sqrt(5.0), sqrt(6.0), sqrt(21.0)

_MIDPOINT = dict(c=[0.5], b=[1.0], A=[[0.5]])

GOLDEN = {
    "g1_s2": dict(
        c=[0.0, 1.0], b=[0.5, 0.5],
        A=[[0.0, 0.0], [0.5, 0.5]]),
    "g1_s3": dict(
        c=[0.0, 0.5, 1.0], b=[1 / 6, 2 / 3, 1 / 6],
        A=[[0.0, 0.0, 0.0],
           [5 / 24, 1 / 3, -1 / 24],
           [1 / 6, 2 / 3, 1 / 6]]),
    "g1_s4": dict(
        c=[0.0, 0.25, 0.75, 1.0], b=[1 / 18, 4 / 9, 4 / 9, 1 / 18],
        A=[[0.0, 0.0, 0.0, 0.0],
           [13 / 288, 17 / 72, -1 / 72, -5 / 288],
           [7 / 96, 11 / 24, 5 / 24, 1 / 96],
           [1 / 18, 4 / 9, 4 / 9, 1 / 18]]),
    "g2_jacobi1": dict(
        c=[3 / 5 - S6 / 10, 3 / 5 + S6 / 10],
        b=[1 / 2 + S6 / 12, 1 / 2 - S6 / 12],
        A=[[3 / 10 + 3 * S6 / 40, 3 / 10 - 7 * S6 / 40],
           [3 / 10 + 7 * S6 / 40, 3 / 10 - 3 * S6 / 40]]),
    "g2_jacobi2": dict(
        c=[2 / 5 - S6 / 10, 2 / 5 + S6 / 10],
        b=[1 / 2 - S6 / 12, 1 / 2 + S6 / 12],
        A=[[1 / 5 - S6 / 120, 1 / 5 - 11 * S6 / 120],
           [1 / 5 + 11 * S6 / 120, 1 / 5 + S6 / 120]]),
    "g2_jacobi3": dict(
        c=[1 / 2 - S5 / 10, 1 / 2 + S5 / 10],
        b=[0.5, 0.5],
        A=[[1 / 4 + S5 / 20, 1 / 4 - 3 * S5 / 20],
           [1 / 4 + 3 * S5 / 20, 1 / 4 - S5 / 20]]),
    "g3_r1": _MIDPOINT,
    "g3_r3": dict(
        c=[1 / 2 - S21 / 14, 0.5, 1 / 2 + S21 / 14],
        b=[7 / 18, 2 / 9, 7 / 18],
        A=[[7 / 36 + S21 / 84, 1 / 9 - S21 / 21, 7 / 36 - S21 / 28],
           [7 / 36 + S21 / 24, 1 / 9, 7 / 36 - S21 / 24],
           [7 / 36 + S21 / 28, 1 / 9 + S21 / 21, 7 / 36 - S21 / 84]]),
    "g4_r1": _MIDPOINT,
    "g4_r2": dict(
        c=[1 / 2 - S2 / 4, 1 / 2 + S2 / 4],
        b=[0.5, 0.5],
        A=[[1 / 4 - S2 / 16, 1 / 4 - 3 * S2 / 16],
           [1 / 4 + 3 * S2 / 16, 1 / 4 + S2 / 16]]),
    "g4_r3": dict(
        c=[1 / 2 - S3 / 4, 0.5, 1 / 2 + S3 / 4],
        b=[2 / 9, 5 / 9, 2 / 9],
        A=[[1 / 9 - S3 / 48, 5 / 18 - S3 / 6, 1 / 9 - S3 / 16],
           [1 / 9 + S3 / 12, 5 / 18, 1 / 9 - S3 / 12],
           [1 / 9 + S3 / 16, 5 / 18 + S3 / 6, 1 / 9 + S3 / 48]]),
    "g5_r1": _MIDPOINT,
    "g5_r2": dict(
        c=[0.25, 0.75], b=[0.5, 0.5],
        A=[[5 / 16, -1 / 16], [9 / 16, 3 / 16]]),
    "g5_r3": dict(
        c=[1 / 2 - S2 / 4, 0.5, 1 / 2 + S2 / 4],
        b=[1 / 3, 1 / 3, 1 / 3],
        A=[[1 / 6 + S2 / 48, 1 / 6 - S2 / 6, 1 / 6 - 5 * S2 / 48],
           [1 / 6 + S2 / 8, 1 / 6, 1 / 6 - S2 / 8],
           [1 / 6 + 5 * S2 / 48, 1 / 6 + S2 / 6, 1 / 6 - S2 / 48]]),
    "g6_s1": _MIDPOINT,
    "g6_s2": dict(
        c=[1 / 2 - S2 / 4, 1 / 2 + S2 / 4],
        b=[0.5, 0.5],
        A=[[1 / 4, 1 / 4 - S2 / 4], [1 / 4 + S2 / 4, 1 / 4]]),
}


def family_g7(omega: float) -> dict:
    """Group-7 golden entries; omega enters the coupling matrix affinely."""
    w = float(omega)
    return dict(
        c=[1 / 2 - S3 / 4, 0.5, 1 / 2 + S3 / 4],
        b=[2 / 9, 5 / 9, 2 / 9],
        A=[[1 / 9, 5 / 18 - 5 * S3 / 36 + 5 * w, 1 / 9 - S3 / 9 - 5 * w],
           [1 / 9 + S3 / 18 - 2 * w, 5 / 18, 1 / 9 - S3 / 18 + 2 * w],
           [1 / 9 + S3 / 9 + 5 * w, 5 / 18 + 5 * S3 / 36 - 5 * w, 1 / 9]])


def _golden_rk(data: dict, name: str) -> RKTableau:
    return RKTableau(np.array(data["A"]), np.array(data["b"]), np.array(data["c"]),
                     provenance={"golden": name})


def _truncated_gauss(weight: orthopoly.Weight, r: int, s: int) -> RKTableau:
    basis = orthopoly.build_basis(weight, max(r + 1, s, 2))
    ct = cstab.truncated_family(basis, r)
    return to_rk(ct, gauss_christoffel(basis, s))


def _lobatto_flat(r: int, s: int) -> RKTableau:
    basis = orthopoly.build_basis(orthopoly.legendre(), max(r + 1, 2))
    ct = cstab.truncated_family(basis, r)
    rule = interpolatory_rule(orthopoly.legendre(), chebyshev_gauss_lobatto_nodes(s),
                              kind="chebyshev-gauss-lobatto")
    return to_rk(ct, rule, mode="unweighted")


def _symplectic_pair(s: int) -> RKTableau:
    ct = cstab.chebyshev_symplectic_order2()
    return to_rk(ct, gauss_christoffel(ct.basis, s))


def _family_member(omega: float) -> RKTableau:
    ct = cstab.chebyshev_symmetric_family(omega)
    return to_rk(ct, gauss_christoffel(ct.basis, 3))


@dataclass
class ReferenceCase:
    table: int
    name: str
    golden: RKTableau
    build: callable


def reference_cases(table: int, omegas=(0.0, 0.05)) -> list:
    """Reference cases of one group (group 7 is instantiated per omega)."""
    w1, w2, w3 = orthopoly.jacobi_type1(), orthopoly.jacobi_type2(), orthopoly.jacobi_type3()
    cheb1, cheb2 = orthopoly.chebyshev_first(), orthopoly.chebyshev_second()
    if table == 1:
        return [
            ReferenceCase(1, "g1_s2", _golden_rk(GOLDEN["g1_s2"], "g1_s2"),
                          lambda: _lobatto_flat(1, 2)),
            ReferenceCase(1, "g1_s3", _golden_rk(GOLDEN["g1_s3"], "g1_s3"),
                          lambda: _lobatto_flat(2, 3)),
            ReferenceCase(1, "g1_s4", _golden_rk(GOLDEN["g1_s4"], "g1_s4"),
                          lambda: _lobatto_flat(2, 4)),
        ]
    if table == 2:
        return [
            ReferenceCase(2, "g2_jacobi1", _golden_rk(GOLDEN["g2_jacobi1"], "g2_jacobi1"),
                          lambda: _truncated_gauss(w1, 2, 2)),
            ReferenceCase(2, "g2_jacobi2", _golden_rk(GOLDEN["g2_jacobi2"], "g2_jacobi2"),
                          lambda: _truncated_gauss(w2, 2, 2)),
            ReferenceCase(2, "g2_jacobi3", _golden_rk(GOLDEN["g2_jacobi3"], "g2_jacobi3"),
                          lambda: _truncated_gauss(w3, 2, 2)),
        ]
    if table == 3:
        return [
            ReferenceCase(3, "g3_r1", _golden_rk(GOLDEN["g3_r1"], "g3_r1"),
                          lambda: _truncated_gauss(w3, 1, 1)),
            ReferenceCase(3, "g3_r2", _golden_rk(GOLDEN["g2_jacobi3"], "g3_r2"),
                          lambda: _truncated_gauss(w3, 2, 2)),
            ReferenceCase(3, "g3_r3", _golden_rk(GOLDEN["g3_r3"], "g3_r3"),
                          lambda: _truncated_gauss(w3, 3, 3)),
        ]
    if table == 4:
        return [
            ReferenceCase(4, f"g4_r{r}", _golden_rk(GOLDEN[f"g4_r{r}"], f"g4_r{r}"),
                          lambda r=r: _truncated_gauss(cheb1, r, r))
            for r in (1, 2, 3)
        ]
    if table == 5:
        return [
            ReferenceCase(5, f"g5_r{r}", _golden_rk(GOLDEN[f"g5_r{r}"], f"g5_r{r}"),
                          lambda r=r: _truncated_gauss(cheb2, r, r))
            for r in (1, 2, 3)
        ]
    if table == 6:
        return [
            ReferenceCase(6, f"g6_s{s}", _golden_rk(GOLDEN[f"g6_s{s}"], f"g6_s{s}"),
                          lambda s=s: _symplectic_pair(s))
            for s in (1, 2)
        ]
    if table == 7:
        return [
            ReferenceCase(7, f"g7_omega_{omega}", _golden_rk(family_g7(omega), "g7"),
                          lambda omega=omega: _family_member(omega))
            for omega in omegas
        ]
    raise ValueError(f"unknown reference group {table}; expected 1..7")


@dataclass
class CaseResult:
    name: str
    max_diff: float
    passed: bool
    entry_diffs: list  # (field, index, got, expected) for offending entries


@dataclass
class ReproduceReport:
    table: int
    tol: float
    cases: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)


def reproduce(table: int, tol: float = 1e-12, omegas=(0.0, 0.05)) -> ReproduceReport:
    """Regenerate a reference group and diff entrywise against golden data."""
    results = []
    for case in reference_cases(table, omegas):
        rk = case.build()
        gold = case.golden
        diffs = []
        worst = 0.0
        for fieldname in ("A", "b", "c"):
            got = np.atleast_1d(getattr(rk, fieldname))
            exp = np.atleast_1d(getattr(gold, fieldname))
            delta = np.abs(got - exp)
            worst = max(worst, float(np.max(delta)))
            for idx in np.argwhere(delta > tol):
                key = tuple(int(v) for v in idx)
                diffs.append((fieldname, key, float(got[tuple(idx)]), float(exp[tuple(idx)])))
        results.append(CaseResult(case.name, worst, worst <= tol, diffs))
    return ReproduceReport(table, tol, results)
