"""Kernel curve, periods, rationality probe, theta identities, residuals."""

import random
from fractions import Fraction as F

import mpmath
import pytest
from mpmath import mp

from conftest import INFINITE_EXEMPLAR, random_h1_model
from walkgroups.catalog import MODELS
from walkgroups.elliptic import (
    EllipticError,
    R0_VALUES,
    estimate_r0,
    kernel_curve,
    order10_residual,
    periods,
    r_of_t,
    rationality_probe,
    theta,
    verify_theta_identities,
)
from walkgroups.models import ModelError, central_weighting

GOLDEN_R = {"simple": F(1, 2), "kreweras": F(1, 3), "order4": F(1, 2),
            "order6": F(1, 3), "order8": F(1, 4), "order10": F(2, 5)}

T_SAMPLES = (F(1, 20), F(1, 10), F(1, 5))


class TestKernelCurve:
    def test_simple_walk_discriminant_exact(self):
        curve = kernel_curve(MODELS["simple"](), F(1, 10))
        assert [str(c) for c in curve.d_coeffs] == [
            "1/1600", "-1/20", "799/800", "-1/20", "1/1600"]

    def test_simple_walk_branch_points(self):
        curve = kernel_curve(MODELS["simple"](), F(1, 10))
        expected = [0.023823036597, 0.0263340389897, 37.973665961, 41.9761769634]
        assert all(b is not None for b in curve.x_branch)
        for b, e in zip(curve.x_branch, expected):
            assert abs(float(b) - e) < 1e-9 * max(1.0, e)

    def test_branch_points_real_distinct(self):
        rng = random.Random(41)
        for _ in range(6):
            model = random_h1_model(rng)
            for t in T_SAMPLES:
                curve = kernel_curve(model, t)
                finite = [float(b) for b in curve.x_branch if b is not None]
                assert len(set(finite)) == len(finite)

    def test_rejects_bad_t(self):
        model = MODELS["simple"]()
        for t in (0, 1, F(3, 2), -F(1, 10)):
            with pytest.raises(EllipticError):
                kernel_curve(model, t)

    def test_rejects_3d(self):
        with pytest.raises(ModelError):
            kernel_curve(MODELS["b3-model1"](), F(1, 10))


class TestPeriods:
    def test_invariant_ranges(self):
        rng = random.Random(17)
        for _ in range(5):
            model = random_h1_model(rng)
            inv = periods(kernel_curve(model, F(1, 10)))
            assert 0 < inv.k2 < 1
            assert abs(inv.k2 + inv.kp2 - 1) < 1e-20
            assert inv.omega2 > 0
            assert 0 < inv.omega3 < inv.omega2
            assert 0 < inv.r < 1
            assert 0 < inv.q < 1

    def test_legendre_consistency(self, golden_finite):
        for name, model in golden_finite.items():
            inv = periods(kernel_curve(model, F(1, 10)))
            assert inv.legendre_rel < 1e-9, name

    def test_carlson_K_against_agm(self):
        # the complete integral both ways: K(k) = RF(0, 1-k^2, 1) vs 1/agm
        from mpmath import elliprf

        with mp.workdps(30):
            for k2 in [0.01 + 0.02 * i for i in range(50)]:
                k2m = mp.mpf(k2)
                K_rf = elliprf(0, 1 - k2m, 1)
                K_agm = mp.pi / (2 * mp.agm(1, mp.sqrt(1 - k2m)))
                assert abs(K_rf - K_agm) <= 1e-12 * K_agm


class TestRationality:
    def test_golden_r_values(self, golden_finite):
        for name, model in golden_finite.items():
            for t in T_SAMPLES:
                r = r_of_t(model, t)
                assert abs(r - float(GOLDEN_R[name])) < 1e-9, (name, t)

    def test_probe_matches_group_order(self, golden_finite, golden_orders):
        for name, model in golden_finite.items():
            probe = rationality_probe(model)
            assert probe.rational == GOLDEN_R[name], name
            assert probe.predicted_group_order() == golden_orders[name], name

    def test_infinite_model_drifts(self):
        probe = rationality_probe(INFINITE_EXEMPLAR)
        assert probe.rational is None
        assert probe.spread > 1e-5

    def test_central_weighting_preserves_r(self):
        base = MODELS["order8"]()
        rw = central_weighting(base, F(3, 2), (F(2, 3), F(5, 4)))
        for t in T_SAMPLES:
            assert abs(r_of_t(rw, t) - 0.25) < 1e-9

    def test_probe_input_validation(self):
        model = MODELS["simple"]()
        with pytest.raises(ModelError):
            rationality_probe(model, t_samples=(F(1, 10), F(1, 5)))
        with pytest.raises(ModelError):
            rationality_probe(model, t_samples=(F(1, 10), F(1, 5), F(1, 2)))


class TestR0:
    def test_goldens_within_tolerance(self, golden_finite):
        for name, model in golden_finite.items():
            est = estimate_r0(model)
            assert est.nearest == GOLDEN_R[name], name
            assert est.distance < 1e-4, (name, est.distance)

    def test_admissible_list_is_13_reduced_fractions(self):
        assert len(R0_VALUES) == 13
        assert len(set(R0_VALUES)) == 13
        for fr in R0_VALUES:
            assert 0 < fr < 1
            assert F(fr.numerator, fr.denominator) == fr


class TestTheta:
    def test_series_against_reference(self):
        # the q-series versus mpmath's jtheta over a nome grid
        with mp.workdps(30):
            for q in (mp.mpf("0.02"), mp.mpf("0.1"), mp.mpf("0.3")):
                for z in (mp.mpf(0), mp.mpf("0.4")):
                    for kind in (1, 2, 3, 4):
                        mine = theta(kind, float(z), float(q))
                        ref = mpmath.jtheta(kind, z, q)
                        assert abs(mine - ref) < 1e-15 * max(1, abs(ref))

    def test_identities_on_goldens(self, golden_finite):
        for name, model in golden_finite.items():
            res = verify_theta_identities(model, F(1, 10))
            assert res.k2_residual < 1e-8, name
            assert res.w2_residual < 1e-8, name

    def test_identities_on_infinite_model(self):
        res = verify_theta_identities(INFINITE_EXEMPLAR, F(1, 10))
        assert res.k2_residual < 1e-8
        assert res.w2_residual < 1e-8


class TestOrder10Residual:
    def test_anchor_value(self):
        assert abs(order10_residual(0, 1) - 869) < 1e-12

    def test_pole_rejected(self):
        with pytest.raises(ModelError):
            order10_residual(1, F(1, 2))

    def test_decreases_on_order10_model(self):
        model = MODELS["order10"]()
        vals = []
        for texp in (2, 3):
            dps = 60 + 40 * texp
            with mp.workdps(dps):
                inv = periods(kernel_curve(model, F(1, 10**texp), dps=dps),
                              dps=dps)
                vals.append(abs(float(order10_residual(inv.w, inv.k2))))
        assert vals[0] > vals[1]
        assert abs(vals[0] - 11.5375) < 1e-3
        assert abs(vals[1] - 3.09156) < 1e-3

    def test_grows_on_order8_model(self):
        model = MODELS["order8"]()
        vals = []
        for texp in (2, 3):
            dps = 60 + 40 * texp
            with mp.workdps(dps):
                inv = periods(kernel_curve(model, F(1, 10**texp), dps=dps),
                              dps=dps)
                vals.append(abs(float(order10_residual(inv.w, inv.k2))))
        assert vals[1] > 100 * vals[0]


class TestPrecisionEnv:
    def test_env_selects_dps(self, monkeypatch):
        from walkgroups.elliptic import default_dps

        monkeypatch.delenv("WALKGROUPS_PRECISION", raising=False)
        base = default_dps()
        monkeypatch.setenv("WALKGROUPS_PRECISION", "55")
        assert default_dps() == 55
        monkeypatch.delenv("WALKGROUPS_PRECISION")
        assert default_dps() == base
