"""Verification of method properties.

Discrete side: moment (simplifying) levels of a Butcher tableau, the order
bound min(rho, 2*alpha+2, alpha+beta+1), symplecticity/symmetry residuals,
stability function and A-stability.  Continuous side: the same levels and
residuals for a polynomial-kernel tableau, computed by exact integration
(Gauss rules of the kernel's own weight at sufficient size).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.polynomial.polynomial as npp

from .cstab import ContinuousTableau
from .orthopoly import MAX_DEGREE, build_basis
from .quadrature import QuadratureRule, gauss_nodes_eigvec
from .reduce import RKTableau

DEFAULT_TOL = 1e-10


# ---------------------------------------------------------------------------
# discrete simplifying levels

def simplifying_levels(rk: RKTableau, max_k: int = 12, tol: float = DEFAULT_TOL):
    """Largest consecutive (rho, alpha, beta) moment levels, each from k=1.

    rho:   sum_i b_i c_i^(k-1)        = 1/k
    alpha: sum_j a_ij c_j^(k-1)       = c_i^k / k         (every row i)
    beta:  sum_i b_i c_i^(k-1) a_ij   = b_j (1 - c_j^k)/k (every column j)
    """
    A, b, c = rk.A, rk.b, rk.c
    rho = alpha = beta = 0
    for k in range(1, max_k + 1):
        ck = c ** (k - 1)
        if rho == k - 1 and abs(float(b @ ck) - 1.0 / k) <= tol:
            rho = k
        if alpha == k - 1 and float(np.max(np.abs(A @ ck - c ** k / k))) <= tol:
            alpha = k
        if beta == k - 1 and float(np.max(np.abs((b * ck) @ A - b * (1.0 - c ** k) / k))) <= tol:
            beta = k
    return rho, alpha, beta


def order_bound(levels) -> int:
    """min(rho, 2*alpha + 2, alpha + beta + 1) from a levels triple."""
    rho, alpha, beta = levels
    return int(min(rho, 2 * alpha + 2, alpha + beta + 1))


# ---------------------------------------------------------------------------
# continuous simplifying levels (exact integration)

def _kernel_quadrature(ct: ContinuousTableau, extra_degree: int):
    """Gauss rule of the kernel weight, exact for kernel x polynomial products."""
    deg = max(ct.degree_a_tau, ct.degree_a_sigma, ct.degree_b) + extra_degree
    s = deg // 2 + 1
    need = max(s, 1)
    if need > MAX_DEGREE:
        raise ValueError("kernel degree too high for exact integration")
    basis = ct.basis if need <= ct.basis.n_max else build_basis(ct.basis.weight, need)
    return gauss_nodes_eigvec(basis, s)


def cs_simplifying_levels(ct: ContinuousTableau, max_k: int = 12,
                          tol: float = DEFAULT_TOL):
    """Continuous levels (xi, eta, zeta) by exact polynomial integration.

    xi:   int B(t) t^(k-1) dt               = 1/k
    eta:  int A(t, s) s^(k-1) ds            = t^k / k        (identity in t)
    zeta: int B(t) t^(k-1) A(t, s) dt       = B(s)(1-s^k)/k  (identity in s)

    The integrals use a Gauss rule of the kernel weight that is exact for
    every integrand involved; the residual identities are then evaluated
    on an equispaced grid with more points than their degree, so a zero
    residual is an identity, not a sampling accident.  Levels are
    consecutive from k = 1; a level equal to max_k means "max_k or
    better" (the flat-weight families satisfy xi at every k).
    """
    nodes, wts = _kernel_quadrature(ct, max_k)
    deg = max(ct.degree_a_tau, ct.degree_a_sigma, ct.degree_b)
    grid = np.linspace(0.0, 1.0, deg + max_k + 2)
    nb = ct.basis.n_max + 1
    pq = ct.basis.values(nodes)[:nb]
    pg = ct.basis.values(grid)[:nb]
    bq = ct.b_coeffs @ pq                      # Bhat at quadrature nodes
    bg = ct.b_coeffs @ pg                      # Bhat on the grid
    a_gq = pg.T @ ct.a_coeffs @ pq             # Ahat(grid, nodes)
    a_qg = pq.T @ ct.a_coeffs @ pg             # Ahat(nodes, grid)
    wb = wts * bq
    xi = eta = zeta = 0
    for k in range(1, max_k + 1):
        xk = nodes ** (k - 1)
        if xi == k - 1 and abs(float(wb @ xk) - 1.0 / k) <= tol:
            xi = k
        if eta == k - 1:
            res = a_gq @ (wts * xk) - grid ** k / k
            if float(np.max(np.abs(res))) <= tol:
                eta = k
        if zeta == k - 1:
            res = (wb * xk) @ a_qg - bg * (1.0 - grid ** k) / k
            if float(np.max(np.abs(res))) <= tol:
                zeta = k
    return xi, eta, zeta


def order_bound_reduced(ct: ContinuousTableau, rule: QuadratureRule,
                        levels=None, max_k: int = 12):
    """Order bound of the reduced tableau from kernel levels and rule order.

    Clamps the kernel levels by the quadrature order p and the kernel
    degrees:  rho = min(xi, p - deg_t Bhat), alpha = min(eta, p - deg_s Ahat),
    beta = min(zeta, p - deg_t Ahat - deg_t Bhat).  Returns (bound, rho,
    alpha, beta).
    """
    xi, eta, zeta = cs_simplifying_levels(ct, max_k) if levels is None else levels
    p = rule.order
    rho = min(xi, p - ct.degree_b)
    alpha = min(eta, p - ct.degree_a_sigma)
    beta = min(zeta, p - ct.degree_a_tau - ct.degree_b)
    return order_bound((rho, alpha, beta)), rho, alpha, beta


# ---------------------------------------------------------------------------
# structure residuals

def symplectic_residual(rk: RKTableau) -> float:
    """max_ij |b_i a_ij + b_j a_ji - b_i b_j|."""
    M = rk.b[:, None] * rk.A + (rk.b[:, None] * rk.A).T - np.outer(rk.b, rk.b)
    return float(np.max(np.abs(M)))


def symmetric_residual(rk: RKTableau) -> float:
    """Discrete self-adjointness residual.

    max over |a_{s+1-i, s+1-j} + a_ij - b_j|, |b_{s+1-i} - b_i| and
    |c_{s+1-i} + c_i - 1|.
    """
    Ar = rk.A[::-1, ::-1]
    r1 = np.max(np.abs(Ar + rk.A - rk.b[None, :]))
    r2 = np.max(np.abs(rk.b[::-1] - rk.b))
    r3 = np.max(np.abs(rk.c[::-1] + rk.c - 1.0))
    return float(max(r1, r2, r3))


_GRID = np.linspace(0.0, 1.0, 22)[1:-1]  # deterministic interior 20-point grid


def cs_symplectic_residual(ct: ContinuousTableau) -> float:
    """Max of |B(t)A(t,s) + B(s)A(s,t) - B(t)B(s)| on the interior grid."""
    t, s = np.meshgrid(_GRID, _GRID, indexing="ij")
    lhs = ct.b_value(t) * ct.a_value(t, s) + ct.b_value(s) * ct.a_value(s, t)
    return float(np.max(np.abs(lhs - ct.b_value(t) * ct.b_value(s))))


def cs_symmetric_residual(ct: ContinuousTableau) -> float:
    """Max residual of the time-reversal identity on the interior grid.

    For symmetric weights the weight-free form
    Ahat(t,s) + Ahat(1-t,1-s) = Bhat(s) is used; otherwise the weighted
    form A(t,s) + A(1-t,1-s) = B(s).
    """
    t, s = np.meshgrid(_GRID, _GRID, indexing="ij")
    if ct.basis.weight.symmetric:
        lhs = ct.a_smooth(t, s) + ct.a_smooth(1.0 - t, 1.0 - s) - ct.b_smooth(s)
    else:
        lhs = ct.a_value(t, s) + ct.a_value(1.0 - t, 1.0 - s) - ct.b_value(s)
    return float(np.max(np.abs(lhs)))


# ---------------------------------------------------------------------------
# stability function

@dataclass
class StabilityFunction:
    """R(z) = num(z)/den(z), ascending coefficients, den normalized to den[0]=1.

    Common pole/zero pairs of the determinant representation are cancelled,
    so shared factors between stages do not inflate the degrees.
    """

    num: np.ndarray
    den: np.ndarray

    def value(self, z):
        return npp.polyval(z, self.num) / npp.polyval(z, self.den)

    def degrees(self):
        return len(self.num) - 1, len(self.den) - 1


def stability_function(rk: RKTableau, cancel_tol: float = 1e-8) -> StabilityFunction:
    """R(z) = det(I - zA + z 1 b^T) / det(I - zA) by determinant interpolation.

    Both determinants are degree <= s polynomials; they are interpolated at
    s+1 integer points and common roots are cancelled (within cancel_tol).
    """
    s = rk.s
    if s > 8:
        raise ValueError("stability function supported for s <= 8")
    pts = np.array([0.0] + [v for k in range(1, s + 1) for v in (float(k), -float(k))])[: s + 1]
    I = np.eye(s)
    one_b = np.outer(np.ones(s), rk.b)
    den_v = np.array([np.linalg.det(I - z * rk.A) for z in pts])
    num_v = np.array([np.linalg.det(I - z * rk.A + z * one_b) for z in pts])
    num = npp.polyfit(pts, num_v, s)
    den = npp.polyfit(pts, den_v, s)
    num, den = _cancel_common(_trim_poly(num), _trim_poly(den), cancel_tol)
    if abs(den[0]) < 1e-13:
        raise RuntimeError("stability denominator vanishes at z=0")
    return StabilityFunction(num / den[0], den / den[0])


def _trim_poly(p: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(p))))
    keep = np.nonzero(np.abs(p) > tol * scale)[0]
    return p[: keep[-1] + 1] if keep.size else np.array([0.0])


def _cancel_common(num: np.ndarray, den: np.ndarray, tol: float):
    if len(num) < 2 or len(den) < 2:
        return num, den
    nr = list(npp.polyroots(num))
    dr = list(npp.polyroots(den))
    kept_d = []
    for root in dr:
        hit = None
        for i, r2 in enumerate(nr):
            if abs(root - r2) <= tol * (1.0 + abs(root)):
                hit = i
                break
        if hit is None:
            kept_d.append(root)
        else:
            nr.pop(hit)
    if len(kept_d) == len(dr):
        return num, den
    new_num = npp.polyfromroots(nr).real * num[-1] if nr else np.array([num[-1]])
    new_den = npp.polyfromroots(kept_d).real * den[-1] if kept_d else np.array([den[-1]])
    return new_num, new_den


def a_stability(R: StabilityFunction, tol: float = 1e-12):
    """A-stability by imaginary-axis sampling plus pole location.

    True iff deg num <= deg den, |R(iy)| <= 1 + tol on 2000 log-spaced
    y in [1e-3, 1e6], and every pole has positive real part.  Returns
    (verdict, certificate).
    """
    dn, dd = R.degrees()
    cert = {"deg_num": dn, "deg_den": dd}
    if dn > dd:
        cert["reason"] = "numerator degree exceeds denominator degree"
        return False, cert
    y = np.logspace(-3.0, 6.0, 2000)
    vals = np.abs(R.value(1j * y))
    worst = int(np.argmax(vals))
    cert["max_boundary_modulus"] = float(vals[worst])
    cert["worst_y"] = float(y[worst])
    poles = npp.polyroots(R.den) if dd >= 1 else np.array([])
    cert["poles"] = [complex(p) for p in poles]
    boundary_ok = bool(vals[worst] <= 1.0 + tol)
    poles_ok = bool(np.all(poles.real > 0.0)) if dd >= 1 else True
    cert["boundary_ok"] = boundary_ok
    cert["poles_ok"] = poles_ok
    return boundary_ok and poles_ok, cert


# ---------------------------------------------------------------------------
# report

@dataclass
class AnalysisReport:
    rho: int
    alpha: int
    beta: int
    order_bound: int
    symplectic_residual: float
    symmetric_residual: float
    stability_num: list
    stability_den: list
    a_stable: bool
    a_stability_certificate: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {
            "levels": {"rho": self.rho, "alpha": self.alpha, "beta": self.beta},
            "order_bound": self.order_bound,
            "symplectic_residual": self.symplectic_residual,
            "symmetric_residual": self.symmetric_residual,
            "stability": {"num": self.stability_num, "den": self.stability_den},
            "a_stable": self.a_stable,
        }
        cert = dict(self.a_stability_certificate)
        cert.pop("poles", None)
        d["a_stability_certificate"] = cert
        return d


def analyze_tableau(rk: RKTableau, max_k: int = 12, tol: float = DEFAULT_TOL) -> AnalysisReport:
    """Full property report for a Butcher tableau."""
    levels = simplifying_levels(rk, max_k=max_k, tol=tol)
    R = stability_function(rk)
    stable, cert = a_stability(R)
    return AnalysisReport(
        rho=levels[0], alpha=levels[1], beta=levels[2],
        order_bound=order_bound(levels),
        symplectic_residual=symplectic_residual(rk),
        symmetric_residual=symmetric_residual(rk),
        stability_num=[float(v) for v in R.num],
        stability_den=[float(v) for v in R.den],
        a_stable=stable,
        a_stability_certificate=cert,
    )
