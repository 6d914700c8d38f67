"""Continuous-stage tableaux as finite orthonormal-basis expansions.

A continuous-stage method on [0, 1] is the kernel triple

    A(tau, sigma) = Ahat(tau, sigma) w(sigma),
    B(tau)        = Bhat(tau) w(tau),
    C(tau)        = tau,

where Ahat and Bhat are polynomials.  This module stores the polynomial
parts in the orthonormal basis of the weight,

    Ahat(tau, sigma) = sum_{i,j} a_coeffs[i, j] P_i(tau) P_j(sigma),
    Bhat(tau)        = sum_j     b_coeffs[j] P_j(tau),

and provides every constructor family used by the reference tableaux:
series truncations, the general Legendre form, skew-parameter symplectic
and symmetric families, and collocation kernels.  Any expansion index the
constructors do not set is zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.polynomial.polynomial as npp

from . import orthopoly
from .orthopoly import MAX_DEGREE, OrthoBasis, Weight, build_basis

BALANCED = "balanced"
EXTENDED_A = "extended_a"
EXTENDED_B = "extended_b"
VARIANTS = (BALANCED, EXTENDED_A, EXTENDED_B)


def _trim(mono: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Drop trailing coefficients that are zero relative to the largest."""
    mono = np.asarray(mono, dtype=float)
    scale = max(1.0, float(np.max(np.abs(mono))) if mono.size else 1.0)
    keep = np.nonzero(np.abs(mono) > tol * scale)[0]
    return mono[: keep[-1] + 1] if keep.size else np.zeros(1)


def _poly_degree(mono: np.ndarray) -> int:
    return len(_trim(mono)) - 1


@dataclass
class ContinuousTableau:
    """Polynomial-kernel one-step method data (immutable by convention)."""

    basis: OrthoBasis
    a_coeffs: np.ndarray
    b_coeffs: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        n = self.basis.n_max + 1
        self.a_coeffs = np.asarray(self.a_coeffs, dtype=float).reshape(n, n)
        self.b_coeffs = np.asarray(self.b_coeffs, dtype=float).reshape(n)
        # monomial tensors: Ahat(t,s) = sum t^i s^j a_mono[i,j]
        C = self.basis.coeffs
        self.a_mono = C.T @ self.a_coeffs @ C
        self.b_mono = C.T @ self.b_coeffs

    # -- pointwise values ------------------------------------------------
    def a_smooth(self, tau, sigma):
        """Polynomial part Ahat(tau, sigma) (bilinear form in stable P-values)."""
        pt = self.basis.values(np.asarray(tau, float))
        ps = self.basis.values(np.asarray(sigma, float))
        out = np.einsum("i...,ij,j...->...", pt, self.a_coeffs, ps)
        return float(out) if out.shape == () else out

    def b_smooth(self, tau):
        """Polynomial part Bhat(tau)."""
        pt = self.basis.values(np.asarray(tau, float))
        out = np.tensordot(self.b_coeffs, pt, axes=(0, 0))
        return float(out) if np.ndim(out) == 0 else out

    def a_value(self, tau, sigma):
        """Full kernel A(tau, sigma) = Ahat * w(sigma)."""
        return self.a_smooth(tau, sigma) * self.basis.weight.value(sigma)

    def b_value(self, tau):
        """Full kernel B(tau) = Bhat * w(tau)."""
        return self.b_smooth(tau) * self.basis.weight.value(tau)

    # -- shape data ------------------------------------------------------
    @property
    def degree_a_tau(self) -> int:
        return _poly_degree(np.max(np.abs(self.a_mono), axis=1))

    @property
    def degree_a_sigma(self) -> int:
        return _poly_degree(np.max(np.abs(self.a_mono), axis=0))

    @property
    def degree_b(self) -> int:
        return _poly_degree(self.b_mono)

    def consistency_residual(self) -> float:
        """Max coefficient residual of int_0^1 A(tau, sigma) dsigma = tau."""
        m = self.basis.moments(self.a_mono.shape[1])
        lhs = self.a_mono @ m  # polynomial in tau
        lhs[1] -= 1.0
        return float(np.max(np.abs(lhs)))

    def as_dict(self) -> dict:
        return {
            "weight": self.basis.weight.as_dict(),
            "n_max": self.basis.n_max,
            "a_coeffs": [[float(v) for v in row] for row in self.a_coeffs],
            "b_coeffs": [float(v) for v in self.b_coeffs],
            "provenance": dict(self.provenance),
        }


# ---------------------------------------------------------------------------
# helpers

def b_series(basis: OrthoBasis, level: int, tail: dict | None = None) -> np.ndarray:
    """Bhat coefficients of the canonical moment-matching series.

    Sets b_j = int_0^1 P_j(x) dx for j < level (the unique choice matching
    the first `level` weighted moments of the flat density) and optional
    `tail` entries {j: value} for j >= level.
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    if level - 1 > basis.n_max:
        raise ValueError("level exceeds basis capacity")
    b = np.zeros(basis.n_max + 1)
    for j in range(level):
        b[j] = basis.integral01(j)
    for j, v in (tail or {}).items():
        if j < level:
            raise ValueError(f"tail index {j} below series level {level}")
        if j > basis.n_max:
            raise ValueError(f"tail index {j} exceeds basis capacity {basis.n_max}")
        b[j] = v
    return b


def _primitive_in_basis(basis: OrthoBasis, j: int) -> np.ndarray:
    return basis.to_basis(basis.primitive(j))


# ---------------------------------------------------------------------------
# constructors

def truncated_family(basis: OrthoBasis, r: int, variant: str = BALANCED) -> ContinuousTableau:
    """Series truncation after r terms (variants widen one of the two sums).

    Ahat(tau, sigma) = sum_j int_0^tau P_j dx P_j(sigma),
    Bhat(tau)        = sum_j int_0^1 P_j dx P_j(tau),

    with the A-sum running to r-1 (r for "extended_a") and the B-sum to
    r-1 (r for "extended_b").
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    a_top = r if variant == EXTENDED_A else r - 1
    b_top = r if variant == EXTENDED_B else r - 1
    if basis.n_max < max(a_top + 1, b_top, 1):
        raise ValueError(
            f"basis capacity n_max={basis.n_max} too small for r={r} ({variant})"
        )
    n = basis.n_max + 1
    M = np.zeros((n, n))
    for j in range(a_top + 1):
        M[:, j] = _primitive_in_basis(basis, j)
    b = b_series(basis, b_top + 1)
    prov = {
        "construction": "truncated",
        "variant": variant,
        "r": r,
        "weight": basis.weight.as_dict(),
    }
    return ContinuousTableau(basis, M, b, prov)


def legendre_family(eta: int, zeta: int, extra: dict | None = None,
                    n_max: int | None = None) -> ContinuousTableau:
    """General flat-weight family with Bhat = 1 and prescribed moment levels.

    Ahat(tau, sigma) = 1/2 + sum_{j=0}^{N1} x_{j+1} L_{j+1}(tau) L_j(sigma)
                           - sum_{j=0}^{N2} x_{j+1} L_{j+1}(sigma) L_j(tau)
                           + extra terms,

    with x_n = 1/(2 sqrt(4 n^2 - 1)), N1 = max(eta-1, zeta-2) and
    N2 = max(eta-2, zeta-1).  Extra entries {(i, j): value} must satisfy
    i >= zeta and j >= eta (they do not disturb the stated levels).
    """
    if eta < 1 or zeta < 1:
        raise ValueError("eta and zeta must be >= 1")
    extra = dict(extra or {})
    n1 = max(eta - 1, zeta - 2)
    n2 = max(eta - 2, zeta - 1)
    needed = max(n1 + 1, n2 + 1, *(max(i, j) for (i, j) in extra), 1) if extra else max(
        n1 + 1, n2 + 1, 1
    )
    n_max = needed if n_max is None else n_max
    if n_max < needed:
        raise ValueError(f"n_max={n_max} below required degree {needed}")
    basis = build_basis(orthopoly.legendre(), n_max)
    n = n_max + 1
    M = np.zeros((n, n))
    M[0, 0] = 0.5
    for j in range(n1 + 1):
        M[j + 1, j] += _xi(j + 1)
    for j in range(n2 + 1):
        M[j, j + 1] -= _xi(j + 1)
    for (i, j), v in extra.items():
        if i < zeta or j < eta:
            raise ValueError(
                f"extra index ({i},{j}) violates i >= zeta={zeta}, j >= eta={eta}"
            )
        M[i, j] += v
    b = np.zeros(n)
    b[0] = 1.0  # Bhat = 1 = L_0 for the flat weight
    prov = {
        "construction": "legendre-family",
        "eta": eta,
        "zeta": zeta,
        "extra": {f"{i},{j}": float(v) for (i, j), v in extra.items()},
        "weight": basis.weight.as_dict(),
    }
    return ContinuousTableau(basis, M, b, prov)


def _xi(n: int) -> float:
    return 1.0 / (2.0 * np.sqrt(4.0 * n * n - 1.0))


def _normalize_skew(skew: dict) -> dict:
    """Validate/complete a skew-symmetric index map {(i, j): value}."""
    full = {}
    for (i, j), v in skew.items():
        if i == j:
            if v != 0.0:
                raise ValueError(f"diagonal entry ({i},{j}) must be zero in a skew map")
            continue
        if (i, j) in full and full[(i, j)] != v:
            raise ValueError(f"conflicting values for entry ({i},{j})")
        full[(i, j)] = float(v)
        if (j, i) in skew and skew[(j, i)] != -v:
            raise ValueError(f"map is not skew-symmetric at ({i},{j})")
        full[(j, i)] = -float(v)
    return full


def symplectic_skew(basis: OrthoBasis, b_coeffs, skew: dict) -> ContinuousTableau:
    """Symplectic family Ahat(tau,sigma) = Bhat(sigma)(1/2 + sum a_ij P_i(tau) P_j(sigma)).

    `skew` maps (i, j) -> a_ij and must be skew-symmetric (missing mirror
    entries are filled in).  The kernel identity
    B(tau) A(tau,sigma) + B(sigma) A(sigma,tau) = B(tau) B(sigma) then
    holds identically, whatever Bhat is.
    """
    skew = _normalize_skew(skew)
    return _bracket_construction(basis, b_coeffs, skew, "symplectic-skew")


def symmetric_skew(basis: OrthoBasis, b_coeffs, odd_map: dict) -> ContinuousTableau:
    """Symmetric family: like symplectic_skew but parity-based.

    Requires a symmetric weight, Bhat even about 1/2 (only even basis
    indices), and entries only at odd i+j; then
    A(tau,sigma) + A(1-tau,1-sigma) = B(sigma) holds identically.
    """
    if not basis.weight.symmetric:
        raise ValueError("symmetric construction needs a symmetric weight (alpha == beta)")
    b_coeffs = np.asarray(b_coeffs, dtype=float)
    odd_idx = np.nonzero(b_coeffs)[0]
    if np.any(odd_idx % 2 == 1):
        raise ValueError("Bhat must be mirror-symmetric: odd basis coefficients must vanish")
    for (i, j), v in odd_map.items():
        if v != 0.0 and (i + j) % 2 == 0:
            raise ValueError(f"entry ({i},{j}) has even index sum; only odd i+j allowed")
    return _bracket_construction(basis, b_coeffs, dict(odd_map), "symmetric-skew")


def _bracket_construction(basis: OrthoBasis, b_coeffs, entries: dict,
                          name: str) -> ContinuousTableau:
    from .quadrature import gauss_nodes_eigvec  # deferred: avoid module cycle

    b_coeffs = np.asarray(b_coeffs, dtype=float)
    n = basis.n_max + 1
    if len(b_coeffs) != n:
        raise ValueError("b_coeffs length must equal n_max + 1")
    deg_b = _poly_degree(basis.from_basis(b_coeffs))
    p0 = float(basis.coeffs[0, 0])
    M = np.zeros((n, n))
    M[0, :] += b_coeffs / (2.0 * p0)
    # project Bhat * P_j onto the basis with a Gauss rule of the same
    # weight (exact for the degrees involved, and free of monomial-basis
    # cancellation)
    ext = build_basis(basis.weight, basis.n_max + 1)
    nodes, wts = gauss_nodes_eigvec(ext, basis.n_max + 1)
    pv = basis.values(nodes)
    bh = b_coeffs @ pv
    for (i, j), v in entries.items():
        if v == 0.0:
            continue
        if not (0 <= i <= basis.n_max and 0 <= j <= basis.n_max):
            raise ValueError(f"entry index ({i},{j}) outside basis range")
        if deg_b + j > basis.n_max:
            raise ValueError(
                f"Bhat * P_{j} has degree {deg_b + j} > n_max={basis.n_max}; "
                "enlarge the basis"
            )
        M[i, :] += v * (pv @ (wts * bh * pv[j]))
    prov = {
        "construction": name,
        "entries": {f"{i},{j}": float(v) for (i, j), v in entries.items()},
        "b_coeffs": [float(v) for v in b_coeffs],
        "weight": basis.weight.as_dict(),
    }
    return ContinuousTableau(basis, M, b_coeffs, prov)


def hairer_collocation(nodes, quad_weights) -> ContinuousTableau:
    """Energy-preserving collocation kernel from Lagrange basis polynomials.

    Ahat(tau, sigma) = sum_i (1/b_i) int_0^tau l_i(x) dx l_i(sigma) with
    Bhat = 1 under the flat weight; b_i are the plain interpolatory weights
    of the nodes.
    """
    nodes = np.asarray(nodes, dtype=float)
    quad_weights = np.asarray(quad_weights, dtype=float)
    s = len(nodes)
    if len(np.unique(nodes)) != s:
        raise ValueError("collocation nodes must be distinct")
    if np.any(quad_weights == 0.0):
        raise ValueError("interpolatory weight b_i = 0; kernel undefined")
    basis = build_basis(orthopoly.legendre(), max(s, 1))
    amono = np.zeros((s + 1, s + 1))
    for i in range(s):
        li = np.array([1.0])
        for j in range(s):
            if j != i:
                li = npp.polymul(li, np.array([-nodes[j], 1.0]) / (nodes[i] - nodes[j]))
        prim = npp.polyint(li)
        amono[: len(prim), : len(li)] += np.outer(prim, li) / quad_weights[i]
    # convert the monomial tensor into the basis tensor
    n = basis.n_max + 1
    padded = np.zeros((n, n))
    padded[: amono.shape[0], : amono.shape[1]] = amono
    Cinv_t = np.linalg.inv(basis.coeffs.T)
    M = Cinv_t @ padded @ np.linalg.inv(basis.coeffs)
    b = np.zeros(n)
    b[0] = 1.0
    prov = {
        "construction": "hairer-collocation",
        "nodes": [float(v) for v in nodes],
        "weight": basis.weight.as_dict(),
    }
    return ContinuousTableau(basis, M, b, prov)


# ---------------------------------------------------------------------------
# named presets (Chebyshev-I symplectic examples)

def chebyshev_symplectic_order2(n_max: int = 4) -> ContinuousTableau:
    """Order-2 symplectic kernel A = (tau - sigma + 1/2)/(pi sqrt(sigma(1-sigma)))."""
    basis = build_basis(orthopoly.chebyshev_first(), n_max)
    b = b_series(basis, 2)
    p0 = float(basis.coeffs[0, 0])
    a10 = np.sqrt(np.pi) / (4.0 * p0)
    ct = symplectic_skew(basis, b, {(1, 0): a10, (0, 1): -a10})
    ct.provenance = {"construction": "chebyshev-symplectic-order2",
                     "weight": basis.weight.as_dict()}
    return ct


def chebyshev_symmetric_family(omega: float, n_max: int = 5) -> ContinuousTableau:
    """One-parameter symplectic+symmetric Chebyshev-I family (order 4 reduced).

    The display parameter omega is affine in the tableau entries; the raw
    skew parameters are nu = 27 pi omega / (4 sqrt(3)) and
    mu = -2 nu/(3 sqrt(pi)) - sqrt(pi)/4 (mu tuned so the kernel stays
    consistent).
    """
    basis = build_basis(orthopoly.chebyshev_first(), n_max)
    b = b_series(basis, 3)
    nu = 27.0 * np.pi * omega / (4.0 * np.sqrt(3.0))
    mu = -2.0 * nu / (3.0 * np.sqrt(np.pi)) - np.sqrt(np.pi) / 4.0
    p0 = float(basis.coeffs[0, 0])
    skew = {(1, 0): -mu / p0, (0, 1): mu / p0, (1, 2): nu, (2, 1): -nu}
    ct = symplectic_skew(basis, b, skew)
    ct.provenance = {"construction": "chebyshev-symmetric-family", "omega": float(omega),
                     "weight": basis.weight.as_dict()}
    return ct


# ---------------------------------------------------------------------------
# expansion identity checker for symplecticity

@dataclass
class ExpansionCheck:
    """Result of the necessary expansion identity for symplecticity."""

    start_index: int
    residuals: dict
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def symplectic_expansion_check(ct: ContinuousTableau, r: int,
                               tol: float = 1e-11) -> ExpansionCheck:
    """Check Bhat(s)(lambda_j - phi_j(s)) = q_j(s) for every index j >= r.

    lambda_j and phi_j are the stored expansion data; q_j(s) is recovered
    by projecting Bhat(t) Ahat(t, s) onto P_j(t) (it is determined by the
    product, never stored).  The identity for all j is equivalent to the
    kernel symplectic condition; the constructors guarantee it only for
    j < r, so indices >= r are the informative ones.  Verification only:
    no parameters are searched.

    The projection integral is done with a Gauss rule of the same weight
    and stable recurrence values, so high indices do not drown in
    monomial-basis cancellation.  Indices above deg(Bhat Ahat) vanish on
    both sides and are not reported.
    """
    from .quadrature import gauss_nodes_eigvec  # deferred: avoid module cycle

    if r < 0:
        raise ValueError("r must be nonnegative")
    basis = ct.basis
    j_max = ct.degree_b + ct.degree_a_tau
    # integrand degree in t: deg(Bhat) + deg_tau(Ahat) + j_max
    s_quad = (ct.degree_b + ct.degree_a_tau + j_max) // 2 + 1
    need = max(s_quad, j_max)
    if need > MAX_DEGREE:
        raise ValueError("candidate degree too high for the expansion check")
    ext = basis if need <= basis.n_max else build_basis(basis.weight, need)
    nodes, wts = gauss_nodes_eigvec(ext, s_quad)

    pt = ext.values(nodes)                 # (n_ext+1, s_quad)
    sig = np.linspace(0.0, 1.0, max(2 * j_max + 3, 9))
    ps = ext.values(sig)                   # (n_ext+1, n_sig)
    nb = basis.n_max + 1
    bh_t = ct.b_coeffs @ pt[:nb]           # Bhat at nodes
    bh_s = ct.b_coeffs @ ps[:nb]
    ah_ts = pt[:nb].T @ ct.a_coeffs @ ps[:nb]   # Ahat(node, sigma_grid)
    weighted = wts * bh_t                       # (s_quad,)
    q = pt[: j_max + 1] * weighted[None, :] @ ah_ts   # q_j on the sigma grid
    scale = max(1.0, float(np.max(np.abs(weighted[None, :] * pt[: j_max + 1]) @ np.abs(ah_ts))))
    residuals = {}
    for j in range(r, j_max + 1):
        lam = ct.b_coeffs[j] if j <= basis.n_max else 0.0
        phi_s = ct.a_coeffs[:, j] @ ps[:nb] if j <= basis.n_max else 0.0
        lhs = bh_s * (lam - phi_s)
        residuals[j] = float(np.max(np.abs(lhs - q[j]))) / scale
    return ExpansionCheck(r, residuals, tol)
