"""Orthonormal polynomial systems for Jacobi-type weights on [0, 1].

The weight family is w(x) = 2**(alpha+beta) * (1-x)**alpha * x**beta with
alpha, beta > -1.  Everything downstream (quadrature rules, continuous
tableaux, moment checks) works with the orthonormal system {P_0, ..., P_n}
of this weight, held both as three-term recurrence coefficients and as
monomial coefficient vectors.

Construction runs in exact rational arithmetic (float parameters are exact
binary rationals) and is rounded to float64 once at the end; the monomial
Gram check would otherwise lose ~10 digits to cancellation at degree 12.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import numpy.polynomial.polynomial as npp
from scipy.linalg import solve_triangular
from scipy.special import beta as beta_function

# Monomial-basis storage is only well conditioned at low degree; the
# constructions here never need more than single digits.
MAX_DEGREE = 20


@dataclass(frozen=True)
class Weight:
    """Jacobi weight w(x) = 2**(alpha+beta) (1-x)**alpha x**beta on [0, 1]."""

    alpha: float
    beta: float
    family: str = "jacobi"

    def __post_init__(self):
        if not (self.alpha > -1.0 and self.beta > -1.0):
            raise ValueError(
                f"weight parameters must exceed -1, got alpha={self.alpha}, beta={self.beta}"
            )

    @property
    def symmetric(self) -> bool:
        return self.alpha == self.beta

    def same_as(self, other: "Weight") -> bool:
        return self.alpha == other.alpha and self.beta == other.beta

    def value(self, x):
        """Evaluate w(x); raises on endpoint evaluation of a singular weight."""
        x = np.asarray(x, dtype=float)
        if self.alpha < 0 and np.any(x >= 1.0):
            raise ValueError("weight is singular at x=1; evaluate strictly inside (0,1)")
        if self.beta < 0 and np.any(x <= 0.0):
            raise ValueError("weight is singular at x=0; evaluate strictly inside (0,1)")
        if np.any(x < 0.0) or np.any(x > 1.0):
            raise ValueError("weight is defined on [0,1]")
        w = 2.0 ** (self.alpha + self.beta) * (1.0 - x) ** self.alpha * x ** self.beta
        return w if w.shape else float(w)

    def mass(self) -> float:
        """Total mass int_0^1 w(x) dx (a Beta-function value)."""
        return float(
            2.0 ** (self.alpha + self.beta) * beta_function(self.alpha + 1.0, self.beta + 1.0)
        )

    def moments(self, count: int) -> np.ndarray:
        """First `count` weighted moments m_k = int_0^1 x^k w(x) dx.

        m_0 is the mass; the rest follow from the exact ratio
        m_{k+1}/m_k = (k+beta+1)/(k+alpha+beta+2).
        """
        a, b = self.alpha, self.beta
        m = np.empty(count)
        m[0] = self.mass()
        for k in range(count - 1):
            m[k + 1] = m[k] * (k + b + 1.0) / (k + a + b + 2.0)
        return m

    def as_dict(self) -> dict:
        return {"family": self.family, "alpha": self.alpha, "beta": self.beta}


def legendre() -> Weight:
    return Weight(0.0, 0.0, "legendre")


def chebyshev_first() -> Weight:
    return Weight(-0.5, -0.5, "chebyshev1")


def chebyshev_second() -> Weight:
    return Weight(0.5, 0.5, "chebyshev2")


def jacobi_type1() -> Weight:
    """w(x) = 2x."""
    return Weight(0.0, 1.0, "jacobi-i")


def jacobi_type2() -> Weight:
    """w(x) = 2(1-x)."""
    return Weight(1.0, 0.0, "jacobi-ii")


def jacobi_type3() -> Weight:
    """w(x) = 4x(1-x)."""
    return Weight(1.0, 1.0, "jacobi-iii")


def gegenbauer(alpha: float) -> Weight:
    return Weight(alpha, alpha, "gegenbauer")


NAMED_WEIGHTS = {
    "legendre": legendre,
    "chebyshev1": chebyshev_first,
    "chebyshev2": chebyshev_second,
    "jacobi-i": jacobi_type1,
    "jacobi-ii": jacobi_type2,
    "jacobi-iii": jacobi_type3,
}


def _recurrence_exact(weight: Weight, n_max: int):
    """Monic three-term recurrence on [0, 1], exact rational relative to the mass.

    p_{k+1} = (x - a_k) p_k - b_k p_{k-1}.  The classical closed forms for
    the [-1,1] Jacobi weight are shifted to [0,1] (a -> (a+1)/2, b -> b/4).
    The k = 1 coefficient uses the cancelled form so that alpha+beta = -1
    (Chebyshev first kind) is not a special case.  b_0 is returned as the
    ratio 1 (true b_0 is the weight mass, kept as a separate float factor).
    """
    a = Fraction(weight.alpha)
    b = Fraction(weight.beta)
    rec_a = [((b - a) / (a + b + 2) + 1) / 2]
    rec_b = [Fraction(1)]
    if n_max >= 1:
        rec_b.append((a + 1) * (b + 1) / ((a + b + 2) ** 2 * (a + b + 3)))
    for k in range(1, n_max):
        s = 2 * k + a + b
        rec_a.append(((b * b - a * a) / (s * (s + 2)) + 1) / 2)
        t = s + 2
        rec_b.append(
            (k + 1) * (k + 1 + a) * (k + 1 + b) * (k + 1 + a + b)
            / (t * t * (t + 1) * (t - 1))
        )
    return rec_a[:n_max], rec_b[: n_max + 1]


def _monic_exact(rec_a, rec_b, n_max: int):
    """Rows of exact monic monomial coefficients from the recurrence."""
    rows = [[Fraction(1)]]
    if n_max >= 1:
        rows.append([-rec_a[0], Fraction(1)])
    for k in range(1, n_max):
        pk, pk1 = rows[k], rows[k - 1]
        new = [Fraction(0)] * (k + 2)
        for i, c in enumerate(pk):
            new[i + 1] += c
            new[i] -= rec_a[k] * c
        for i, c in enumerate(pk1):
            new[i] -= rec_b[k] * c
        rows.append(new)
    return rows


@dataclass
class OrthoBasis:
    """Orthonormal polynomials P_0..P_{n_max} of a Jacobi weight.

    coeffs[k] holds the ascending monomial coefficients of P_k (row k of a
    lower-triangular matrix); rec_alpha/rec_beta are the monic recurrence
    coefficients (rec_beta[0] is the weight mass); norms[k] = ||monic_k||_w,
    so the leading coefficient of P_k is 1/norms[k].
    """

    weight: Weight
    n_max: int
    rec_alpha: np.ndarray
    rec_beta: np.ndarray
    norms: np.ndarray
    coeffs: np.ndarray
    _exact: tuple = field(default=None, repr=False)
    _moment_cache: dict = field(default_factory=dict, repr=False)

    @property
    def leading(self) -> np.ndarray:
        return np.diagonal(self.coeffs).copy()

    def moments(self, count: int) -> np.ndarray:
        got = self._moment_cache.get("m")
        if got is None or len(got) < count:
            got = self.weight.moments(max(count, 4 * self.n_max + 8))
            self._moment_cache["m"] = got
        return got[:count]

    def eval(self, n: int, x):
        """Value of P_n at x (Horner on the stored coefficients)."""
        self._check_degree(n)
        return npp.polyval(x, self.coeffs[n, : n + 1])

    def values(self, x) -> np.ndarray:
        """P_0(x)..P_{n_max}(x) via the three-term recurrence, shape (n_max+1, ...).

        The recurrence keeps every intermediate O(1), unlike Horner on the
        monomial coefficients, whose magnitude grows exponentially with
        degree; use this whenever several degrees are needed at once.
        """
        x = np.asarray(x, dtype=float)
        out = np.empty((self.n_max + 1,) + x.shape)
        sb = np.sqrt(self.rec_beta)
        out[0] = 1.0 / sb[0]
        if self.n_max >= 1:
            out[1] = (x - self.rec_alpha[0]) * out[0] / sb[1]
        for k in range(1, self.n_max):
            out[k + 1] = ((x - self.rec_alpha[k]) * out[k] - sb[k] * out[k - 1]) / sb[k + 1]
        return out

    def primitive(self, n: int) -> np.ndarray:
        """Monomial coefficients of int_0^t P_n(x) dx."""
        self._check_degree(n)
        return npp.polyint(self.coeffs[n, : n + 1])

    def integral01(self, n: int) -> float:
        """int_0^1 P_n(x) dx (no weight), exact up to the final norm division.

        Summed in rational arithmetic: the symmetric-weight odd-degree
        integrals are exactly zero, with no monomial cancellation noise.
        """
        self._check_degree(n)
        monic, _ = self._exact
        total = sum(c / (i + 1) for i, c in enumerate(monic[n]))
        return float(total) / float(self.norms[n])

    def weighted_integral(self, mono: np.ndarray) -> float:
        """int_0^1 q(x) w(x) dx for q given by ascending monomial coeffs."""
        mono = np.asarray(mono, dtype=float)
        return float(mono @ self.moments(len(mono)))

    def gram(self) -> np.ndarray:
        """<P_i, P_j>_w by exact moment summation (rational arithmetic)."""
        monic, nrm2 = self._exact
        a = Fraction(self.weight.alpha)
        b = Fraction(self.weight.beta)
        q = [Fraction(1)]
        for k in range(2 * self.n_max + 1):
            q.append(q[-1] * (k + b + 1) / (k + a + b + 2))
        n = self.n_max + 1
        G = np.empty((n, n))
        for i in range(n):
            for j in range(i + 1):
                inner = sum(
                    ci * cj * q[ii + jj]
                    for ii, ci in enumerate(monic[i])
                    for jj, cj in enumerate(monic[j])
                )
                val = float(inner / nrm2[i]) if i == j else float(
                    inner
                ) / math.sqrt(float(nrm2[i]) * float(nrm2[j]))
                G[i, j] = G[j, i] = val
        return G

    def to_basis(self, mono: np.ndarray) -> np.ndarray:
        """Coefficients u with q = sum_k u_k P_k, for a monomial-coeff poly q."""
        mono = np.trim_zeros(np.asarray(mono, dtype=float), "b")
        if len(mono) == 0:
            return np.zeros(self.n_max + 1)
        if len(mono) > self.n_max + 1:
            raise ValueError(
                f"degree {len(mono) - 1} exceeds basis capacity n_max={self.n_max}"
            )
        q = np.zeros(self.n_max + 1)
        q[: len(mono)] = mono
        return solve_triangular(self.coeffs.T, q, lower=False)

    def from_basis(self, u: np.ndarray) -> np.ndarray:
        """Ascending monomial coefficients of sum_k u_k P_k."""
        u = np.asarray(u, dtype=float)
        return self.coeffs.T @ u

    def _check_degree(self, n: int):
        if not 0 <= n <= self.n_max:
            raise ValueError(f"degree {n} outside basis range 0..{self.n_max}")


def build_basis(weight: Weight, n_max: int) -> OrthoBasis:
    """Construct the orthonormal system P_0..P_{n_max} for `weight`."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if n_max > MAX_DEGREE:
        raise ValueError(
            f"n_max={n_max} exceeds the supported degree cap {MAX_DEGREE}; "
            "monomial-basis storage is not reliable beyond it"
        )
    rec_a, rec_b = _recurrence_exact(weight, n_max)
    monic = _monic_exact(rec_a, rec_b, n_max)

    # ||monic_k||^2 = b_0 b_1 ... b_k; the mass b_0 is kept as a float factor
    mass = weight.mass()
    nrm2 = [Fraction(1)]
    for k in range(1, n_max + 1):
        nrm2.append(nrm2[-1] * rec_b[k])
    norms = np.array([math.sqrt(float(r) * mass) for r in nrm2])
    if not np.all(np.isfinite(norms)) or np.any(norms <= 0.0):
        raise ValueError("norm recurrence under/overflowed; reduce n_max")

    coeffs = np.zeros((n_max + 1, n_max + 1))
    for k in range(n_max + 1):
        nk = norms[k]
        for i, c in enumerate(monic[k]):
            coeffs[k, i] = float(c) / nk

    rec_alpha = np.array([float(v) for v in rec_a])
    rec_beta = np.array([float(v) * (mass if k == 0 else 1.0) for k, v in enumerate(rec_b)])
    return OrthoBasis(weight, n_max, rec_alpha, rec_beta, norms, coeffs, (monic, nrm2))
