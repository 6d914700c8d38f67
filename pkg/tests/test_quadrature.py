import numpy as np
import numpy.polynomial.polynomial as npp
import pytest

from csrk import orthopoly as op
from csrk import quadrature as quad

ALL_NAMED = [
    op.legendre(), op.chebyshev_first(), op.chebyshev_second(),
    op.jacobi_type1(), op.jacobi_type2(), op.jacobi_type3(),
]


class TestGaussChristoffel:
    def test_legendre_single_node(self):
        b = op.build_basis(op.legendre(), 3)
        r = quad.gauss_christoffel(b, 1)
        assert r.nodes == pytest.approx([0.5])
        assert r.weights == pytest.approx([1.0])
        assert r.order == 2

    def test_chebyshev_first_two_nodes(self):
        b = op.build_basis(op.chebyshev_first(), 3)
        r = quad.gauss_christoffel(b, 2)
        assert r.nodes == pytest.approx(
            [(2 - np.sqrt(2)) / 4, (2 + np.sqrt(2)) / 4], abs=1e-14)
        assert r.weights == pytest.approx([np.pi / 4, np.pi / 4], abs=1e-14)
        assert r.order == 4

    def test_jacobi3_two_nodes(self):
        b = op.build_basis(op.jacobi_type3(), 3)
        r = quad.gauss_christoffel(b, 2)
        assert r.nodes == pytest.approx(
            [(5 - np.sqrt(5)) / 10, (5 + np.sqrt(5)) / 10], abs=1e-14)
        assert r.weights == pytest.approx([1 / 3, 1 / 3], abs=1e-14)

    def test_nodes_are_roots_of_basis_polynomial(self):
        for w in ALL_NAMED:
            b = op.build_basis(w, 6)
            r = quad.gauss_christoffel(b, 5)
            assert np.max(np.abs(b.eval(5, r.nodes))) < 1e-8 * np.max(np.abs(b.coeffs[5]))

    @pytest.mark.parametrize("w", ALL_NAMED)
    def test_exactness_and_sharpness(self, w):
        basis = op.build_basis(w, 8)
        for s in range(1, 7):
            r = quad.gauss_christoffel(basis, s)
            m = w.moments(2 * s + 1)
            for k in range(2 * s):
                assert abs(float(r.weights @ r.nodes ** k) - m[k]) <= 1e-12
            assert abs(float(r.weights @ r.nodes ** (2 * s)) - m[2 * s]) > 1e-10

    @pytest.mark.parametrize("w", ALL_NAMED)
    def test_positive_weights(self, w):
        basis = op.build_basis(w, 8)
        for s in range(1, 8):
            assert np.min(quad.gauss_christoffel(basis, s).weights) > 0

    @pytest.mark.parametrize("w", ALL_NAMED)
    def test_node_interlacing(self, w):
        basis = op.build_basis(w, 8)
        for s in range(1, 7):
            inner = quad.gauss_christoffel(basis, s).nodes
            outer = quad.gauss_christoffel(basis, s + 1).nodes
            for i in range(s):
                assert outer[i] < inner[i] < outer[i + 1]

    def test_symmetric_weight_mirror_rule(self):
        for w in (op.legendre(), op.chebyshev_first(), op.chebyshev_second(),
                  op.jacobi_type3(), op.gegenbauer(1.4)):
            basis = op.build_basis(w, 7)
            for s in range(1, 7):
                r = quad.gauss_christoffel(basis, s)
                assert r.nodes[::-1] == pytest.approx(1.0 - r.nodes, abs=1e-12)
                assert r.weights[::-1] == pytest.approx(r.weights, abs=1e-12)

    def test_total_mass(self):
        for w in ALL_NAMED:
            basis = op.build_basis(w, 6)
            for s in (1, 3, 5):
                r = quad.gauss_christoffel(basis, s)
                assert float(np.sum(r.weights)) == pytest.approx(w.mass(), abs=1e-12)

    def test_s_out_of_range(self):
        b = op.build_basis(op.legendre(), 4)
        with pytest.raises(ValueError):
            quad.gauss_christoffel(b, 0)
        with pytest.raises(ValueError):
            quad.gauss_christoffel(b, 5)

    def test_leading_coefficient_exposed(self):
        b = op.build_basis(op.legendre(), 4)
        r = quad.gauss_christoffel(b, 3)
        assert r.leading_coeff == pytest.approx(b.leading[3])


class TestInterpolatoryWeights:
    def test_simpson(self):
        w = quad.interpolatory_weights(op.legendre(), [0.0, 0.5, 1.0])
        assert w == pytest.approx([1 / 6, 2 / 3, 1 / 6], abs=1e-14)

    def test_single_node(self):
        assert quad.interpolatory_weights(op.legendre(), [0.5]) == pytest.approx([1.0])
        assert quad.interpolatory_weights(op.chebyshev_first(), [0.3]) == pytest.approx(
            [np.pi / 2], abs=1e-14)

    def test_chebyshev_equal_weights_at_gauss_nodes(self):
        b = op.build_basis(op.chebyshev_first(), 4)
        nodes = npp.polyroots(b.coeffs[3, :4]).real
        w = quad.interpolatory_weights(op.chebyshev_first(), np.sort(nodes))
        assert w == pytest.approx([np.pi / 6] * 3, abs=1e-13)

    def test_duplicate_nodes_rejected(self):
        with pytest.raises(ValueError):
            quad.interpolatory_weights(op.legendre(), [0.2, 0.2, 0.8])

    def test_nodes_outside_interval_rejected(self):
        with pytest.raises(ValueError):
            quad.interpolatory_weights(op.legendre(), [-0.1, 0.5])


class TestChebyshevGaussLobatto:
    def test_small_sizes(self):
        assert quad.chebyshev_gauss_lobatto_nodes(2) == pytest.approx([0.0, 1.0])
        assert quad.chebyshev_gauss_lobatto_nodes(3) == pytest.approx([0.0, 0.5, 1.0])
        assert quad.chebyshev_gauss_lobatto_nodes(4) == pytest.approx(
            [0.0, 0.25, 0.75, 1.0], abs=1e-15)

    def test_properties(self):
        for s in range(2, 9):
            c = quad.chebyshev_gauss_lobatto_nodes(s)
            assert c[0] == 0.0 and c[-1] == 1.0
            assert np.all(np.diff(c) > 0)
            assert c[::-1] == pytest.approx(1.0 - c, abs=1e-15)

    def test_too_few(self):
        with pytest.raises(ValueError):
            quad.chebyshev_gauss_lobatto_nodes(1)


class TestInterpolatoryRule:
    def test_cgl_flat_weight_rules(self):
        r3 = quad.interpolatory_rule(op.legendre(), quad.chebyshev_gauss_lobatto_nodes(3))
        assert r3.weights == pytest.approx([1 / 6, 2 / 3, 1 / 6], abs=1e-14)
        assert r3.order == 4  # Simpson
        r4 = quad.interpolatory_rule(op.legendre(), quad.chebyshev_gauss_lobatto_nodes(4))
        assert r4.weights == pytest.approx([1 / 18, 4 / 9, 4 / 9, 1 / 18], abs=1e-14)
        assert r4.order == 4

    def test_order_at_least_node_count(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            nodes = np.sort(rng.uniform(0.05, 0.95, size=4))
            r = quad.interpolatory_rule(op.jacobi_type1(), nodes)
            assert r.order >= 4
