import numpy as np
import pytest

from csrk import cstab
from csrk import orthopoly as op
from csrk.analyze import (cs_simplifying_levels, cs_symmetric_residual,
                          cs_symplectic_residual)
from csrk.quadrature import gauss_christoffel

GRID = np.linspace(0.0, 1.0, 22)[1:-1]


def xi(n):
    return 1.0 / (2.0 * np.sqrt(4.0 * n * n - 1.0))


@pytest.fixture(scope="module")
def legendre6():
    return op.build_basis(op.legendre(), 6)


class TestTruncatedFamily:
    def test_balanced_r1_is_linear_kernel(self, legendre6):
        ct = cstab.truncated_family(legendre6, 1)
        for t in (0.0, 0.3, 1.0):
            for s in (0.1, 0.9):
                assert ct.a_smooth(t, s) == pytest.approx(t, abs=1e-14)
        assert ct.b_smooth(0.77) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("variant,a_top,b_top", [
        (cstab.BALANCED, 2, 2), (cstab.EXTENDED_A, 3, 2), (cstab.EXTENDED_B, 2, 3)])
    def test_variant_sums(self, legendre6, variant, a_top, b_top):
        ct = cstab.truncated_family(legendre6, 3, variant)
        assert ct.degree_a_sigma == a_top - 1
        assert ct.degree_a_tau == a_top
        nonzero_b = np.nonzero(np.abs(ct.b_coeffs) > 1e-14)[0]
        assert nonzero_b.max() <= b_top - 1  # flat weight: only j = 0 survives

    def test_consistency_all_weights(self):
        for w in (op.legendre(), op.chebyshev_first(), op.chebyshev_second(),
                  op.jacobi_type1(), op.jacobi_type2(), op.jacobi_type3()):
            basis = op.build_basis(w, 6)
            for r in (1, 2, 3, 4):
                ct = cstab.truncated_family(basis, r)
                assert ct.consistency_residual() <= 1e-12

    def test_capacity_validation(self):
        basis = op.build_basis(op.legendre(), 2)
        with pytest.raises(ValueError):
            cstab.truncated_family(basis, 3)
        with pytest.raises(ValueError):
            cstab.truncated_family(basis, 0)
        with pytest.raises(ValueError):
            cstab.truncated_family(basis, 2, "bogus")

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_gegenbauer_parity_identity(self, alpha):
        # phi_j(t) + (-1)^j phi_j(1-t) = lambda_j for the truncation data
        basis = op.build_basis(op.gegenbauer(alpha), 6)
        ct = cstab.truncated_family(basis, 4)
        lam = [basis.integral01(j) for j in range(4)]
        for j in range(4):
            phi = lambda t: np.polynomial.polynomial.polyval(t, basis.primitive(j))
            for t in (0.1, 0.37, 0.9):
                assert phi(t) + (-1) ** j * phi(1 - t) == pytest.approx(lam[j], abs=1e-13)


class TestLegendreFamily:
    def test_eta1_zeta1_closed_form(self):
        ct = cstab.legendre_family(1, 1)
        L1 = lambda x: np.sqrt(3.0) * (2.0 * x - 1.0)
        for t in (0.0, 0.4, 1.0):
            for s in (0.2, 0.8):
                expect = 0.5 + xi(1) * L1(t) - xi(1) * L1(s)
                assert ct.a_smooth(t, s) == pytest.approx(expect, abs=1e-14)
        assert ct.b_smooth(0.3) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("r", [2, 3, 4])
    def test_matches_truncation_for_eta_r_zeta_rm1(self, r):
        basis = op.build_basis(op.legendre(), r + 2)
        trunc = cstab.truncated_family(basis, r)
        gen = cstab.legendre_family(r, r - 1)
        ts = np.linspace(0.05, 0.95, 6)
        for t in ts:
            for s in ts:
                assert gen.a_smooth(t, s) == pytest.approx(
                    trunc.a_smooth(t, s), abs=1e-12)

    def test_extra_parameter_keeps_consistency_breaks_level2(self):
        ct = cstab.legendre_family(1, 1, {(1, 1): 0.3})
        assert ct.consistency_residual() <= 1e-13
        levels = cs_simplifying_levels(ct)
        assert levels[1] == 1

    def test_extra_index_validation(self):
        with pytest.raises(ValueError):
            cstab.legendre_family(2, 1, {(1, 1): 0.5})  # j < eta
        with pytest.raises(ValueError):
            cstab.legendre_family(1, 2, {(1, 1): 0.5})  # i < zeta

    def test_level_arguments_validated(self):
        with pytest.raises(ValueError):
            cstab.legendre_family(0, 1)


class TestSymplecticSkew:
    def test_empty_map_is_half_b(self, legendre6):
        b = cstab.b_series(legendre6, 2)
        ct = cstab.symplectic_skew(legendre6, b, {})
        for t in (0.2, 0.7):
            for s in (0.3, 0.9):
                assert ct.a_value(t, s) == pytest.approx(ct.b_value(s) / 2.0, abs=1e-13)
        assert cs_symplectic_residual(ct) <= 1e-13

    def test_skew_validation(self, legendre6):
        b = cstab.b_series(legendre6, 1)
        with pytest.raises(ValueError):
            cstab.symplectic_skew(legendre6, b, {(1, 1): 0.2})
        with pytest.raises(ValueError):
            cstab.symplectic_skew(legendre6, b, {(0, 1): 0.2, (1, 0): 0.2})

    def test_order2_instance_matches_legendre_family(self, legendre6):
        b = cstab.b_series(legendre6, 1)
        ct = cstab.symplectic_skew(legendre6, b, {(1, 0): xi(1), (0, 1): -xi(1)})
        ref = cstab.legendre_family(1, 1)
        ts = np.linspace(0.1, 0.9, 5)
        for t in ts:
            for s in ts:
                assert ct.a_smooth(t, s) == pytest.approx(ref.a_smooth(t, s), abs=1e-13)
        assert cs_symplectic_residual(ct) <= 1e-13
        assert cs_symmetric_residual(ct) <= 1e-13

    def test_random_instances_satisfy_kernel_identity(self):
        rng = np.random.default_rng(11)
        for trial in range(6):
            w = (op.legendre(), op.jacobi_type3(), op.chebyshev_second())[trial % 3]
            basis = op.build_basis(w, 8)
            b = cstab.b_series(basis, 3)
            skew = {(i, j): rng.uniform(-1, 1) for i in range(4) for j in range(i + 1, 5)}
            ct = cstab.symplectic_skew(basis, b, skew)
            assert cs_symplectic_residual(ct) <= 1e-12
            assert cstab.symplectic_expansion_check(ct, 3).passed

    def test_capacity_error(self):
        basis = op.build_basis(op.legendre(), 3)
        b = cstab.b_series(basis, 3)  # degree 2
        with pytest.raises(ValueError):
            cstab.symplectic_skew(basis, b, {(0, 2): 1.0, (2, 0): -1.0})


class TestSymmetricSkew:
    def test_requires_symmetric_weight(self):
        basis = op.build_basis(op.jacobi_type1(), 4)
        with pytest.raises(ValueError):
            cstab.symmetric_skew(basis, cstab.b_series(basis, 1), {})

    def test_requires_odd_index_sum(self, legendre6):
        b = cstab.b_series(legendre6, 1)
        with pytest.raises(ValueError):
            cstab.symmetric_skew(legendre6, b, {(1, 1): 0.5})

    def test_requires_even_b(self, legendre6):
        b = cstab.b_series(legendre6, 1, tail={3: 0.2})
        with pytest.raises(ValueError):
            cstab.symmetric_skew(legendre6, b, {(0, 1): 0.5})

    def test_outputs_are_symmetric(self, legendre6):
        b = cstab.b_series(legendre6, 1, tail={2: 0.15})
        ct = cstab.symmetric_skew(legendre6, b, {(1, 0): 0.4, (0, 1): 0.9, (2, 1): -0.3})
        assert cs_symmetric_residual(ct) <= 1e-13
        t, s = np.meshgrid(GRID, GRID, indexing="ij")
        res = ct.a_value(t, s) + ct.a_value(1 - t, 1 - s) - ct.b_value(s)
        assert np.max(np.abs(res)) <= 1e-13

    def test_empty_map_symmetric(self):
        basis = op.build_basis(op.chebyshev_second(), 5)
        ct = cstab.symmetric_skew(basis, cstab.b_series(basis, 1), {})
        assert cs_symmetric_residual(ct) <= 1e-13


class TestExpansionCheck:
    def test_worked_chebyshev_example_values(self):
        ct = cstab.chebyshev_symplectic_order2()
        chk = cstab.symplectic_expansion_check(ct, 2)
        assert chk.passed
        # stored expansion data of the worked example
        assert ct.b_coeffs[2] == pytest.approx(0.0, abs=1e-15)          # lambda_2
        phi1 = ct.basis.from_basis(ct.a_coeffs[:, 1])
        assert phi1[0] == pytest.approx(-np.sqrt(np.pi) / (2 * np.pi), abs=1e-14)
        assert np.max(np.abs(phi1[1:])) <= 1e-14                        # constant
        # recovered Bhat(s)(lambda_1 - phi_1(s)) equals w-free psi_1 = 1/pi^(3/2)
        psi1 = ct.b_smooth(0.37) * (0.0 - phi1[0])
        assert psi1 == pytest.approx(np.pi ** -1.5, abs=1e-14)

    def test_skew_construction_always_passes(self, legendre6):
        b = cstab.b_series(legendre6, 2)
        ct = cstab.symplectic_skew(legendre6, b, {(2, 1): 0.7, (1, 2): -0.7})
        for r in (0, 1, 2):
            assert cstab.symplectic_expansion_check(ct, r).passed

    def test_balanced_r1_fails(self, legendre6):
        ct = cstab.truncated_family(legendre6, 1)
        chk = cstab.symplectic_expansion_check(ct, 1)
        assert not chk.passed
        assert chk.residuals[1] == pytest.approx(xi(1), abs=1e-12)


class TestHairerCollocation:
    def test_single_midpoint_node(self):
        ct = cstab.hairer_collocation([0.5], [1.0])
        for t in (0.0, 0.3, 1.0):
            assert ct.a_smooth(t, 0.8) == pytest.approx(t, abs=1e-14)

    def test_two_gauss_nodes_consistent(self):
        basis = op.build_basis(op.legendre(), 4)
        rule = gauss_christoffel(basis, 2)
        ct = cstab.hairer_collocation(rule.nodes, rule.weights)
        assert ct.consistency_residual() <= 1e-13

    def test_zero_weight_rejected(self):
        with pytest.raises(ValueError):
            cstab.hairer_collocation([0.2, 0.8], [0.0, 1.0])

    def test_duplicate_nodes_rejected(self):
        with pytest.raises(ValueError):
            cstab.hairer_collocation([0.5, 0.5], [0.5, 0.5])


class TestPresets:
    def test_order2_kernel_values(self):
        ct = cstab.chebyshev_symplectic_order2()
        assert ct.a_value(0.5, 0.5) == pytest.approx(1.0 / np.pi, abs=1e-14)
        # closed form A = (t - s + 1/2) / (pi sqrt(s(1-s)))
        for t in (0.2, 0.8):
            for s in (0.3, 0.6):
                expect = (t - s + 0.5) / (np.pi * np.sqrt(s * (1 - s)))
                assert ct.a_value(t, s) == pytest.approx(expect, abs=1e-13)
        assert ct.b_value(0.25) == pytest.approx(
            1.0 / (np.pi * np.sqrt(0.25 * 0.75)), abs=1e-13)

    def test_endpoint_evaluation_raises(self):
        ct = cstab.chebyshev_symplectic_order2()
        with pytest.raises(ValueError):
            ct.a_value(0.5, 0.0)
        with pytest.raises(ValueError):
            ct.b_value(1.0)

    @pytest.mark.parametrize("omega", [0.0, 0.05, -0.2])
    def test_family_structure(self, omega):
        ct = cstab.chebyshev_symmetric_family(omega)
        assert ct.consistency_residual() <= 1e-13
        assert cs_symplectic_residual(ct) <= 1e-12
        assert cs_symmetric_residual(ct) <= 1e-12
        assert ct.b_smooth(0.5) > 0.0
        xi_, eta, zeta = cs_simplifying_levels(ct)
        assert xi_ >= 4 and eta >= 1 and zeta >= 1

    def test_family_b_independent_of_omega(self):
        b0 = cstab.chebyshev_symmetric_family(0.0)
        b1 = cstab.chebyshev_symmetric_family(0.3)
        assert b0.b_coeffs == pytest.approx(b1.b_coeffs, abs=0.0)


class TestSerializationDict:
    def test_as_dict_roundtrip_fields(self, legendre6):
        ct = cstab.truncated_family(legendre6, 2)
        d = ct.as_dict()
        assert d["weight"]["family"] == "legendre"
        assert len(d["b_coeffs"]) == legendre6.n_max + 1
        assert d["provenance"]["construction"] == "truncated"
