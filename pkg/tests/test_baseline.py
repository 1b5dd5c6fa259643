"""Homogeneous-pipe solution, linearized compliance, and interface jumps."""

from __future__ import annotations

import numpy as np
import pytest

import weldcreep as wc

REF = wc.PipeConfig(r_i=1.0, r_o=2.0, H=8.0, p=1.0, n=3.0)


class TestBaselineCoefficients:
    def test_reference_values(self):
        # direct evaluation of the closed form, cross-checked against the
        # wall boundary values below
        c = wc.baseline_coefficients(REF)
        assert c.a == pytest.approx(1.7024143839193155, rel=1e-12)
        assert c.a_r == pytest.approx(-2.7024143839193155, rel=1e-12)
        assert c.a_theta == pytest.approx(-0.9008047946397718, rel=1e-12)
        assert c.a_z == pytest.approx(-1.8016095892795436, rel=1e-12)

    @pytest.mark.parametrize("p,n,ri,ro", [(1.0, 3.0, 1.0, 2.0),
                                           (2.5, 5.0, 0.8, 1.1),
                                           (0.3, 1.7, 2.0, 6.0)])
    def test_boundary_conditions(self, p, n, ri, ro):
        cfg = wc.PipeConfig(r_i=ri, r_o=ro, H=4.0, p=p, n=n)
        inner = wc.baseline_stress(cfg, ri)
        outer = wc.baseline_stress(cfg, ro)
        assert inner.sigma_r == pytest.approx(-p, rel=1e-13)
        assert outer.sigma_r == pytest.approx(0.0, abs=1e-13 * p)

    def test_linear_material_is_lame(self):
        cfg = wc.PipeConfig(r_i=1.0, r_o=2.0, H=8.0, p=1.0, n=1.0)
        c = wc.baseline_coefficients(cfg)
        assert c.a == pytest.approx(1.0 / 3.0, rel=1e-14)
        assert c.a_r == pytest.approx(-4.0 / 3.0, rel=1e-14)

    def test_coefficient_relations(self):
        c = wc.baseline_coefficients(REF)
        n = REF.n
        assert c.a_theta == pytest.approx((n - 2.0) / n * c.a_r, rel=1e-14)
        assert c.a_z == pytest.approx((n - 1.0) / n * c.a_r, rel=1e-14)


class TestBaselineStress:
    def test_deviator_structure(self):
        # deviator is (a_r/n) r^(-2/n) (1, -1, 0) with zero shear
        c = wc.baseline_coefficients(REF)
        for r in (1.0, 1.37, 2.0):
            sig = wc.baseline_stress(REF, r).as_array()
            dev = wc.core.deviator(sig)
            q = c.a_r / REF.n * r ** (-2.0 / REF.n)
            np.testing.assert_allclose(dev, [q, -q, 0.0, 0.0], rtol=1e-12,
                                       atol=1e-14)

    def test_radial_equilibrium(self):
        # finite-difference residual of d(sigma_r)/dr + (sigma_r - sigma_t)/r
        radii = np.linspace(REF.r_i + 1e-4, REF.r_o - 1e-4, 100)
        eps = 1e-6
        sig = wc.baseline_stress(REF, radii)
        dsr = (wc.baseline_stress(REF, radii + eps)[:, 0]
               - wc.baseline_stress(REF, radii - eps)[:, 0]) / (2 * eps)
        res = dsr + (sig[:, 0] - sig[:, 1]) / radii
        scale = np.abs(sig[:, 1]).max()
        assert np.abs(res).max() < 1e-8 * scale

    def test_outside_wall_rejected(self):
        with pytest.raises(ValueError):
            wc.baseline_stress(REF, 0.9)
        with pytest.raises(ValueError):
            wc.baseline_stress(REF, np.array([1.5, 2.1]))


class TestCompliance:
    def test_shear_entry(self):
        cm = wc.compliance_at(REF, 1.5)
        assert cm.matrix[3, 3] == pytest.approx(2.0 * cm.prefactor, rel=1e-13)

    @pytest.mark.parametrize("r", [1.0, 1.25, 1.5, 1.9])
    def test_eigenvalues(self, r):
        cm = wc.compliance_at(REF, r)
        eig = np.sort(np.linalg.eigvalsh(cm.matrix))
        expected = np.sort(cm.prefactor * np.array([0.0, 1.0, 2.0, REF.n]))
        np.testing.assert_allclose(eig, expected, rtol=1e-12, atol=1e-14)

    def test_hydrostatic_null_direction(self):
        cm = wc.compliance_at(REF, 1.4)
        out = cm.matrix @ np.array([1.0, 1.0, 1.0, 0.0])
        np.testing.assert_allclose(out, 0.0, atol=1e-13 * cm.prefactor)

    def test_matches_finite_difference_jacobian(self):
        eps = 1e-7
        for r in (1.1, 1.5, 1.9):
            cm = wc.compliance_at(REF, r)
            sig0 = wc.baseline_stress(REF, r).as_array()
            jac = np.empty((4, 4))
            for k in range(4):
                d = np.zeros(4)
                d[k] = eps
                jac[:, k] = (wc.norton_strain_rate(sig0 + d, 1.0, REF.n)
                             - wc.norton_strain_rate(sig0 - d, 1.0, REF.n)) / (2 * eps)
            np.testing.assert_allclose(cm.matrix, jac, rtol=0,
                                       atol=1e-6 * np.abs(jac).max())

    def test_linear_material_constant_isotropic(self):
        cfg = wc.PipeConfig(r_i=1.0, r_o=2.0, H=8.0, p=1.0, n=1.0)
        cm1 = wc.compliance_at(cfg, 1.1)
        cm2 = wc.compliance_at(cfg, 1.9)
        # n = 1: the prefactor exponent vanishes, the compliance is the
        # constant incompressible isotropic matrix
        assert cm1.prefactor == pytest.approx(1.0)
        np.testing.assert_allclose(cm1.matrix, cm2.matrix, rtol=1e-14)
        eig = np.sort(np.linalg.eigvalsh(cm1.matrix))
        np.testing.assert_allclose(eig, [0.0, 1.0, 1.0, 2.0], rtol=1e-13, atol=1e-14)


class TestDisplacementJump:
    def test_zero_pressure(self):
        cfg = wc.PipeConfig(r_i=1.0, r_o=2.0, H=8.0, p=0.0, n=3.0)
        assert wc.displacement_jump(cfg, 1.5) == 0.0

    def test_reference_value(self):
        # c = 3 a_r^3 / 27 = -2.1928722 for the reference problem
        assert wc.interface_constant(REF) == pytest.approx(-2.19287220081, rel=1e-10)
        assert wc.displacement_jump(REF, 1.5) == pytest.approx(-1.4619148005,
                                                               rel=1e-10)

    def test_inverse_radius_scaling(self):
        radii = np.linspace(1.0, 2.0, 7)
        jumps = wc.displacement_jump(REF, radii)
        np.testing.assert_allclose(jumps * radii, jumps[0] * radii[0], rtol=1e-13)


class TestStressJump:
    def test_zero_pressure(self):
        cfg = wc.PipeConfig(r_i=1.0, r_o=2.0, H=8.0, p=0.0, n=3.0)
        assert wc.stress_jump(cfg, 1.5) == (0.0, 0.0)

    def test_reference_value(self):
        jr, jt = wc.stress_jump(REF, 1.5)
        assert jr == pytest.approx(0.2291475729298836, rel=1e-12)
        assert jt == pytest.approx(-jr, rel=1e-14)

    def test_antisymmetry(self):
        radii = np.linspace(1.0, 2.0, 17)
        jr, jt = wc.stress_jump(REF, radii)
        np.testing.assert_allclose(jr + jt, 0.0, atol=1e-15)

    def test_consistency_with_compliance_route(self):
        # guard against sign errors: the closed form must agree with the
        # 2x2 solve through the compliance at 50 radii
        for r in np.linspace(REF.r_i, REF.r_o, 50):
            jr, jt = wc.stress_jump(REF, float(r))
            qr, qt = wc.stress_jump_from_compliance(REF, float(r))
            assert jr == pytest.approx(qr, abs=1e-12)
            assert jt == pytest.approx(qt, abs=1e-12)

    def test_consistency_other_exponents(self):
        for n in (1.0, 2.0, 4.5):
            cfg = wc.PipeConfig(r_i=1.0, r_o=2.0, H=8.0, p=1.3, n=n)
            jr, _ = wc.stress_jump(cfg, 1.4)
            qr, _ = wc.stress_jump_from_compliance(cfg, 1.4)
            assert jr == pytest.approx(qr, rel=1e-11)
