"""Constitutive model, layup normalization, and quadrature utilities."""

from __future__ import annotations

import numpy as np
import pytest

import weldcreep as wc
from weldcreep.core import MaterialLayup, composite_gauss_rule


def random_stresses(count, seed=0, scale=2.0):
    rng = np.random.default_rng(seed)
    return scale * rng.standard_normal((count, 4))


class TestNormalizeLayup:
    def test_two_material(self):
        layup = MaterialLayup(coefficients=(0.7, 1.0), interfaces=(0.5,))
        norm = wc.normalize_layup(layup)
        np.testing.assert_allclose(norm.s, 0.3, rtol=1e-15)
        assert norm.alphas == (1.0,)
        assert norm.interfaces == (0.5,)

    def test_homogeneous(self):
        layup = MaterialLayup(coefficients=(1.0, 1.0), interfaces=(0.5,))
        norm = wc.normalize_layup(layup)
        assert norm.s == 0.0
        assert norm.alphas == ()

    def test_three_material(self):
        # 1 - s*(alpha1 + 1) = 0.6 and 1 - s = 0.8 give s = 0.2, alpha1 = 1
        layup = MaterialLayup(coefficients=(0.6, 0.8, 1.0), interfaces=(2.0, 5.0))
        norm = wc.normalize_layup(layup)
        np.testing.assert_allclose(norm.s, 0.2, rtol=1e-14)
        np.testing.assert_allclose(norm.alphas, (1.0, 1.0), rtol=1e-13)

    def test_round_trip_at_layer_midpoints(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            m = rng.integers(2, 6)
            coeffs = tuple(rng.uniform(0.2, 3.0, m))
            ifaces = tuple(np.sort(rng.uniform(0.5, 7.5, m - 1)))
            if np.any(np.diff(ifaces) < 1e-3) or abs(coeffs[-2] - coeffs[-1]) < 1e-6:
                continue
            layup = MaterialLayup(coefficients=coeffs, interfaces=ifaces)
            norm = wc.normalize_layup(layup)
            edges = np.concatenate([[0.0], ifaces, [8.0]])
            mids = 0.5 * (edges[:-1] + edges[1:])
            rebuilt = norm.coefficient_at(mids)
            expected = np.asarray(coeffs) / coeffs[-1]
            np.testing.assert_allclose(rebuilt, expected, rtol=0, atol=1e-14)

    def test_large_parameter_flag(self):
        layup = MaterialLayup(coefficients=(0.3, 1.0), interfaces=(0.5,))
        assert wc.normalize_layup(layup).s_is_large
        layup = MaterialLayup(coefficients=(0.7, 1.0), interfaces=(0.5,))
        assert not wc.normalize_layup(layup).s_is_large

    def test_validation(self):
        with pytest.raises(ValueError):
            MaterialLayup(coefficients=(1.0, -1.0), interfaces=(0.5,))
        with pytest.raises(ValueError):
            MaterialLayup(coefficients=(1.0, 1.0), interfaces=())
        with pytest.raises(ValueError):
            MaterialLayup(coefficients=(1.0, 1.0, 1.0), interfaces=(2.0, 1.0))


class TestPipeConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            wc.PipeConfig(r_i=2.0, r_o=1.0, H=8.0, p=1.0, n=3.0)
        with pytest.raises(ValueError):
            wc.PipeConfig(r_i=1.0, r_o=2.0, H=-1.0, p=1.0, n=3.0)
        with pytest.raises(ValueError):
            wc.PipeConfig(r_i=1.0, r_o=2.0, H=8.0, p=1.0, n=0.5)
        with pytest.raises(ValueError):
            wc.two_material_config(1.0, 2.0, 8.0, 9.0, 1.0, 3.0, s=0.1)


class TestVonMises:
    def test_hydrostatic(self):
        sig = wc.StressState(3.2, 3.2, 3.2, 0.0)
        assert wc.von_mises(sig) == pytest.approx(0.0, abs=1e-14)

    def test_uniaxial(self):
        sig = wc.StressState(0.0, 0.0, 1.7, 0.0)
        assert wc.von_mises(sig) == pytest.approx(1.7, rel=1e-14)

    def test_pure_shear(self):
        # s:s = 2 tau^2, so svm = sqrt(3) |tau|
        sig = wc.StressState(0.0, 0.0, 0.0, -0.8)
        assert wc.von_mises(sig) == pytest.approx(np.sqrt(3.0) * 0.8, rel=1e-14)


class TestNortonStrainRate:
    def test_zero_stress(self):
        rate = wc.norton_strain_rate(wc.StressState(0, 0, 0, 0), 2.0, 3.0)
        np.testing.assert_allclose(rate.as_array(), 0.0)

    def test_uniaxial(self):
        sbar, A, n = 1.3, 0.7, 3.0
        rate = wc.norton_strain_rate(wc.StressState(0, 0, sbar, 0), A, n)
        assert rate.eps_z == pytest.approx(2.0 / 3.0 * A * sbar**n, rel=1e-14)
        assert rate.eps_r == pytest.approx(-A * sbar**n / 3.0, rel=1e-14)
        assert rate.eps_theta == pytest.approx(-A * sbar**n / 3.0, rel=1e-14)

    def test_incompressible(self):
        rates = wc.norton_strain_rate(random_stresses(1000, seed=1), 1.0, 3.0)
        trace = rates[:, 0] + rates[:, 1] + rates[:, 2]
        norm = np.linalg.norm(rates, axis=1)
        assert np.all(np.abs(trace) < 1e-12 * np.maximum(norm, 1e-300))

    @pytest.mark.parametrize("lam", [0.5, 2.0, 7.3])
    def test_homogeneity_degree_n(self, lam):
        n = 3.0
        sig = random_stresses(64, seed=2)
        base = wc.norton_strain_rate(sig, 1.0, n)
        scaled = wc.norton_strain_rate(lam * sig, 1.0, n)
        np.testing.assert_allclose(scaled, lam**n * base, rtol=1e-12)

    def test_linear_material(self):
        sig = random_stresses(16, seed=3)
        rate = wc.norton_strain_rate(sig, 1.0, 1.0)
        dev = wc.core.deviator(sig)
        dev[:, 3] *= 2.0
        np.testing.assert_allclose(rate, dev, rtol=1e-14)


class TestNortonTangent:
    def test_matches_finite_differences(self):
        n, A = 3.0, 1.4
        sig = random_stresses(100, seed=4)
        tang = wc.norton_tangent(sig, A, n)
        eps = 1e-6
        for k in range(4):
            dsig = np.zeros(4)
            dsig[k] = eps
            fwd = wc.norton_strain_rate(sig + dsig, A, n)
            bwd = wc.norton_strain_rate(sig - dsig, A, n)
            fd = (fwd - bwd) / (2.0 * eps)
            scale = np.abs(fd).max()
            np.testing.assert_allclose(tang[:, :, k], fd, rtol=0, atol=1e-6 * scale)

    def test_symmetry(self):
        tang = wc.norton_tangent(random_stresses(32, seed=5), 1.0, 4.0)
        np.testing.assert_allclose(tang, np.swapaxes(tang, -1, -2), rtol=1e-13)


class TestGaussRule:
    def test_order_one(self):
        x, w = wc.gauss_legendre_rule(1)
        np.testing.assert_allclose(x, [0.0])
        np.testing.assert_allclose(w, [2.0])

    def test_order_two(self):
        x, w = wc.gauss_legendre_rule(2)
        np.testing.assert_allclose(np.sort(x), [-1 / np.sqrt(3), 1 / np.sqrt(3)])
        np.testing.assert_allclose(w, [1.0, 1.0])

    def test_cubic_exactness(self):
        x, w = wc.gauss_legendre_rule(2, (0.0, 1.0))
        assert np.sum(w * x**3) == pytest.approx(0.25, rel=1e-15)

    def test_invalid_order(self):
        with pytest.raises(ValueError):
            wc.gauss_legendre_rule(0)

    def test_composite_rule(self):
        x, w = composite_gauss_rule(np.array([0.0, 0.3, 1.0]), 6)
        assert np.sum(w * x**5) == pytest.approx(1.0 / 6.0, rel=1e-14)
        with pytest.raises(ValueError):
            composite_gauss_rule(np.array([0.0, 0.0, 1.0]), 6)
