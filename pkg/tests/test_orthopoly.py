import math

import numpy as np
import numpy.polynomial.polynomial as npp
import pytest
from scipy.integrate import quad

from csrk import orthopoly as op

ALL_NAMED = [
    op.legendre(), op.chebyshev_first(), op.chebyshev_second(),
    op.jacobi_type1(), op.jacobi_type2(), op.jacobi_type3(),
]


def xi(n):
    return 1.0 / (2.0 * np.sqrt(4.0 * n * n - 1.0))


class TestWeight:
    def test_named_parameters(self):
        assert op.legendre().alpha == 0 and op.legendre().beta == 0
        assert op.chebyshev_first().alpha == -0.5
        assert op.chebyshev_second().alpha == 0.5
        assert (op.jacobi_type1().alpha, op.jacobi_type1().beta) == (0.0, 1.0)
        assert (op.jacobi_type2().alpha, op.jacobi_type2().beta) == (1.0, 0.0)
        assert (op.jacobi_type3().alpha, op.jacobi_type3().beta) == (1.0, 1.0)
        assert op.gegenbauer(0.7).symmetric

    def test_values(self):
        w = op.jacobi_type3()
        x = np.array([0.25, 0.5])
        assert np.allclose(w.value(x), 4.0 * x * (1.0 - x))
        assert op.chebyshev_first().value(0.5) == pytest.approx(1.0)

    def test_invalid_parameters_rejected(self):
        with pytest.raises(ValueError):
            op.Weight(-1.0, 0.0)
        with pytest.raises(ValueError):
            op.Weight(0.0, -1.5)

    def test_singular_endpoint_evaluation_rejected(self):
        w = op.chebyshev_first()
        with pytest.raises(ValueError):
            w.value(0.0)
        with pytest.raises(ValueError):
            w.value(1.0)
        w.value(1e-6)  # interior is fine

    @pytest.mark.parametrize("w", [op.chebyshev_first(), op.jacobi_type1(), op.Weight(0.3, 1.7)])
    def test_moments_against_adaptive_quadrature(self, w):
        m = w.moments(6)
        scale = 2.0 ** (w.alpha + w.beta)
        for k in range(6):
            # endpoint-singular weights need the algebraic-weight integrator
            ref, _ = quad(lambda x: scale * x ** k, 0, 1,
                          weight="alg", wvar=(w.beta, w.alpha))
            assert m[k] == pytest.approx(ref, abs=1e-11)


class TestBuildBasis:
    def test_legendre_low_degree(self):
        b = op.build_basis(op.legendre(), 1)
        assert b.coeffs[0, 0] == pytest.approx(1.0, abs=1e-15)
        # P_1 = sqrt(3) (2x - 1)
        assert b.coeffs[1, :2] == pytest.approx([-np.sqrt(3), 2 * np.sqrt(3)], abs=1e-14)

    def test_chebyshev_first_constant(self):
        b = op.build_basis(op.chebyshev_first(), 0)
        assert b.eval(0, 0.123) == pytest.approx(np.sqrt(2.0 / np.pi), abs=1e-15)

    @pytest.mark.parametrize("w", ALL_NAMED + [op.gegenbauer(1.7), op.Weight(-0.3, 2.5)])
    def test_orthonormality_gram(self, w):
        basis = op.build_basis(w, 12)
        G = basis.gram()
        assert np.max(np.abs(G - np.eye(13))) <= 1e-12

    @pytest.mark.parametrize("alpha", [0.8, 2.0])
    def test_symmetric_weight_parity(self, alpha):
        basis = op.build_basis(op.gegenbauer(alpha), 10)
        for n in range(11):
            c = basis.coeffs[n, : n + 1]
            # coefficients of P_n(1-x): binomial transform with sign
            flipped = np.zeros_like(c)
            for m_, cm in enumerate(c):
                contrib = cm * np.array(
                    [(-1) ** j * math.comb(m_, j) for j in range(m_ + 1)])
                flipped[: m_ + 1] += contrib
            scale = max(1.0, np.max(np.abs(c)))
            assert np.max(np.abs(flipped - (-1) ** n * c)) <= 1e-13 * scale

    def test_degree_and_positive_leading(self):
        for w in ALL_NAMED:
            b = op.build_basis(w, 8)
            assert np.all(b.leading > 0)
            for n in range(9):
                assert abs(b.coeffs[n, n]) > 0
                assert np.all(b.coeffs[n, n + 1:] == 0.0)

    def test_zero_count_simple_roots(self):
        for w in ALL_NAMED:
            b = op.build_basis(w, 8)
            for n in range(1, 9):
                roots = npp.polyroots(b.coeffs[n, : n + 1])
                assert np.max(np.abs(roots.imag)) < 1e-9
                real = np.sort(roots.real)
                assert len(real) == n
                assert np.all(real > 0) and np.all(real < 1)
                assert np.min(np.diff(real)) > 1e-8 if n > 1 else True

    def test_derivative_relation(self):
        for (a, b_) in [(0.0, 0.0), (-0.5, -0.5), (1.0, 1.0), (0.3, 1.2)]:
            b1 = op.build_basis(op.Weight(a, b_), 10)
            b2 = op.build_basis(op.Weight(a + 1, b_ + 1), 9)
            for n in range(1, 11):
                d = npp.polyder(b1.coeffs[n, : n + 1])
                rhs = 2.0 * np.sqrt(n * (n + a + b_ + 1)) * b2.coeffs[n - 1, : n]
                scale = max(1.0, np.max(np.abs(rhs)))
                assert np.max(np.abs(d - rhs)) <= 1e-11 * scale

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            op.build_basis(op.legendre(), -1)
        with pytest.raises(ValueError):
            op.build_basis(op.legendre(), op.MAX_DEGREE + 1)


class TestEval:
    def test_spec_values(self):
        b = op.build_basis(op.legendre(), 3)
        assert b.eval(1, 1.0) == pytest.approx(np.sqrt(3.0), abs=1e-14)
        t = op.build_basis(op.chebyshev_first(), 3)
        assert t.eval(2, 0.5) == pytest.approx(-2.0 / np.sqrt(np.pi), abs=1e-14)

    def test_degree_zero_constant(self):
        for w in ALL_NAMED:
            b = op.build_basis(w, 2)
            xs = np.array([0.1, 0.5, 0.9])
            vals = b.eval(0, xs)
            assert np.allclose(vals, vals[0])

    def test_out_of_range(self):
        b = op.build_basis(op.legendre(), 2)
        with pytest.raises(ValueError):
            b.eval(3, 0.5)
        with pytest.raises(ValueError):
            b.eval(-1, 0.5)

    def test_values_matrix_matches_eval(self):
        for w in (op.legendre(), op.chebyshev_first()):
            b = op.build_basis(w, 10)
            xs = np.linspace(0.05, 0.95, 7)
            V = b.values(xs)
            for n in range(11):
                # Horner on monomial coefficients loses ~|coeff|*eps
                tol = 1e-14 * max(1.0, np.max(np.abs(b.coeffs[n])))
                assert V[n] == pytest.approx(b.eval(n, xs), abs=tol)


class TestPrimitive:
    def test_legendre_n0(self):
        b = op.build_basis(op.legendre(), 2)
        # int_0^t L_0 = t = xi_1 L_1(t) + (1/2) L_0(t)
        expect = xi(1) * np.pad(b.coeffs[1, :2], (0, 1)) + 0.5 * np.pad(b.coeffs[0, :1], (0, 2))
        assert b.primitive(0) == pytest.approx(expect[:2], abs=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_legendre_recurrence_form(self, n):
        b = op.build_basis(op.legendre(), 6)
        prim = b.primitive(n)
        expect = np.zeros(n + 2)
        expect[: n + 2] += xi(n + 1) * b.coeffs[n + 1, : n + 2]
        expect[: n] -= xi(n) * b.coeffs[n - 1, : n]
        assert prim == pytest.approx(expect, abs=1e-13)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_chebyshev_first_closed_form(self, n):
        b = op.build_basis(op.chebyshev_first(), 7)
        prim = b.primitive(n)
        expect = np.zeros(n + 2)
        expect[: n + 2] += b.coeffs[n + 1, : n + 2] / (4.0 * (n + 1))
        expect[: n] -= b.coeffs[n - 1, : n] / (4.0 * (n - 1))
        expect[0] += (-1.0) ** (n + 1) / ((n * n - 1.0) * np.sqrt(np.pi))
        scale = max(1.0, np.max(np.abs(expect)))
        assert np.max(np.abs(prim - expect)) <= 1e-13 * scale

    def test_chebyshev_first_low_forms(self):
        b = op.build_basis(op.chebyshev_first(), 3)
        # n=0: sqrt(2) T_1 / 4 + 1/sqrt(2 pi)
        p0 = b.primitive(0)
        expect = np.sqrt(2.0) / 4.0 * np.pad(b.coeffs[1, :2], (0, 0))
        expect = expect.copy()
        expect[0] += 1.0 / np.sqrt(2.0 * np.pi)
        assert p0 == pytest.approx(expect, abs=1e-14)
        # n=1: (T_2 - 2/sqrt(pi))/8
        p1 = b.primitive(1)
        expect = b.coeffs[2, :3] / 8.0
        expect[0] -= 2.0 / np.sqrt(np.pi) / 8.0
        assert p1 == pytest.approx(expect, abs=1e-14)

    def test_vanishes_at_zero(self):
        for w in ALL_NAMED:
            b = op.build_basis(w, 5)
            for n in range(6):
                assert b.primitive(n)[0] == 0.0


class TestIntegral01:
    def test_legendre(self):
        b = op.build_basis(op.legendre(), 5)
        assert b.integral01(0) == pytest.approx(1.0, abs=1e-15)
        for n in range(1, 6):
            assert b.integral01(n) == 0.0

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.3])
    def test_gegenbauer_odd_vanishes(self, alpha):
        b = op.build_basis(op.gegenbauer(alpha), 9)
        for n in range(1, 10, 2):
            assert b.integral01(n) == 0.0

    def test_chebyshev_first_even(self):
        b = op.build_basis(op.chebyshev_first(), 8)
        for n in range(2, 9, 2):
            assert b.integral01(n) == pytest.approx(
                2.0 / (np.sqrt(np.pi) * (1.0 - n * n)), abs=1e-13)
        for n in range(1, 9, 2):
            assert b.integral01(n) == 0.0
        assert b.integral01(0) == pytest.approx(np.sqrt(2.0 / np.pi), abs=1e-14)


class TestBasisTransforms:
    def test_roundtrip(self):
        b = op.build_basis(op.jacobi_type3(), 9)
        rng = np.random.default_rng(7)
        q = rng.standard_normal(10)
        assert b.from_basis(b.to_basis(q)) == pytest.approx(q, abs=1e-12)

    def test_degree_overflow(self):
        b = op.build_basis(op.legendre(), 3)
        with pytest.raises(ValueError):
            b.to_basis(np.ones(5))

    def test_weighted_integral(self):
        w = op.jacobi_type1()
        b = op.build_basis(w, 4)
        # int_0^1 (1 + 2x^2) 2x dx = 1 + 2*2/4 = 2
        assert b.weighted_integral([1.0, 0.0, 2.0]) == pytest.approx(2.0, abs=1e-14)
