"""Weighted interpolatory quadrature on [0, 1].

Gauss-Christoffel rules take their nodes from the roots of the degree-s
orthonormal polynomial (symmetric tridiagonal eigenproblem on the
recurrence); weights always come from an interpolatory moment solve, so
fixed-node rules (e.g. Chebyshev-Gauss-Lobatto abscissae) share the same
path.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .orthopoly import OrthoBasis, Weight

GAUSS_CHRISTOFFEL = "gauss-christoffel"


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights of int_0^1 f(x) w(x) dx ~= sum b_i f(c_i), order p.

    `order` is the classical quadrature order: exact for polynomials of
    degree order-1.  `leading_coeff` (Gauss rules only) is the leading
    coefficient of the degree-s orthonormal polynomial; the quadrature
    remainder scales with 1/leading_coeff**2.
    """

    weight: Weight
    nodes: np.ndarray
    weights: np.ndarray
    order: int
    kind: str
    leading_coeff: float | None = None

    @property
    def s(self) -> int:
        return len(self.nodes)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "s": self.s,
            "order": self.order,
            "nodes": list(map(float, self.nodes)),
            "weights": list(map(float, self.weights)),
        }


def interpolatory_weights(weight: Weight, nodes) -> np.ndarray:
    """Weights b_i = int_0^1 l_i(x) w(x) dx of the interpolatory rule.

    Solved as the Vandermonde moment system sum_i b_i c_i^k = m_k,
    k = 0..s-1 (for s = 1 the single basis function is l_1 = 1, which the
    k = 0 equation reproduces).
    """
    nodes = np.asarray(nodes, dtype=float)
    s = len(nodes)
    if s < 1:
        raise ValueError("need at least one node")
    if np.any(nodes < 0.0) or np.any(nodes > 1.0):
        raise ValueError("nodes must lie in [0, 1]")
    if len(np.unique(nodes)) != s:
        raise ValueError("duplicate quadrature nodes")
    V = np.vander(nodes, s, increasing=True).T
    m = weight.moments(s)
    return np.linalg.solve(V, m)


def exactness_degree(weight: Weight, nodes, weights, k_cap: int | None = None,
                     tol: float = 1e-10) -> int:
    """Largest k with all moments 0..k reproduced by the rule."""
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    s = len(nodes)
    k_cap = 2 * s + 2 if k_cap is None else k_cap
    m = weight.moments(k_cap + 1)
    scale = max(1.0, float(m[0]))
    deg = -1
    for k in range(k_cap + 1):
        if abs(float(weights @ nodes ** k) - m[k]) > tol * scale:
            break
        deg = k
    return deg


def gauss_nodes_eigvec(basis: OrthoBasis, s: int):
    """Gauss nodes and eigenvector-formula weights (stable at any s).

    Internal workhorse for projection integrals: the moment-solve weights
    of the public rule lose digits beyond s ~ 6, the eigenvector formula
    does not.
    """
    if not 1 <= s <= basis.n_max:
        raise ValueError(f"need 1 <= s <= n_max={basis.n_max}, got s={s}")
    if s == 1:
        return basis.rec_alpha[:1].copy(), np.array([basis.weight.mass()])
    nodes, vecs = eigh_tridiagonal(basis.rec_alpha[:s], np.sqrt(basis.rec_beta[1:s]))
    return nodes, basis.weight.mass() * vecs[0] ** 2


def gauss_christoffel(basis: OrthoBasis, s: int) -> QuadratureRule:
    """s-point Gauss-Christoffel rule for the basis weight; order 2s.

    Nodes are the eigenvalues of the symmetric tridiagonal matrix built
    from the monic recurrence (diagonal a_k, off-diagonal sqrt(b_k)).
    """
    if not 1 <= s <= basis.n_max:
        raise ValueError(f"need 1 <= s <= n_max={basis.n_max}, got s={s}")
    diag = basis.rec_alpha[:s]
    off = np.sqrt(basis.rec_beta[1:s])
    if s == 1:
        nodes = diag.copy()
    else:
        nodes, _ = eigh_tridiagonal(diag, off)
        nodes = np.sort(nodes)
    if np.any(nodes < -1e-10) or np.any(nodes > 1.0 + 1e-10):
        raise RuntimeError("Gauss nodes escaped [0,1]; recurrence data corrupted")
    nodes = np.clip(nodes, 0.0, 1.0)
    weights = interpolatory_weights(basis.weight, nodes)
    return QuadratureRule(
        basis.weight, nodes, weights, 2 * s, GAUSS_CHRISTOFFEL,
        leading_coeff=float(basis.leading[s]) if s <= basis.n_max else None,
    )


def chebyshev_gauss_lobatto_nodes(s: int) -> np.ndarray:
    """s nodes (1 + cos((s-i)pi/(s-1)))/2, i = 1..s: endpoints included."""
    if s < 2:
        raise ValueError("Chebyshev-Gauss-Lobatto nodes need s >= 2")
    i = np.arange(1, s + 1)
    c = 0.5 * (1.0 + np.cos((s - i) * np.pi / (s - 1)))
    return 0.5 * (c + 1.0 - c[::-1])  # exact mirror symmetry


def interpolatory_rule(weight: Weight, nodes, kind: str = "interpolatory") -> QuadratureRule:
    """Fixed-node interpolatory rule under `weight`, order measured by moments."""
    nodes = np.sort(np.asarray(nodes, dtype=float))
    weights = interpolatory_weights(weight, nodes)
    deg = exactness_degree(weight, nodes, weights)
    if deg < len(nodes) - 1:
        raise RuntimeError(
            f"interpolatory rule lost exactness (degree {deg} < {len(nodes) - 1})"
        )
    return QuadratureRule(weight, nodes, weights, deg + 1, kind)
