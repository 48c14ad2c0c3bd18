"""Orbit search over the birational generators; matrix representation."""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import INFINITE_EXEMPLAR, random_central_weightings
from walkgroups.catalog import MODELS, b3_model1
from walkgroups.geometry import critical_point
from walkgroups.groups import (
    PoleError,
    apply_generator,
    build_generators,
    group_order,
    jacobians_at,
    matrix_group_order,
    pair_order,
)
from walkgroups.models import WeightedModel, central_weighting, model_seed


def _sample_point(rng, d):
    return tuple(F(rng.randint(1, 50), rng.randint(1, 50)) for _ in range(d))


class TestInvolutions:
    @pytest.mark.parametrize("name", ["simple", "kreweras", "order6", "order10",
                                      "b3-model1"])
    def test_generators_are_involutions(self, name):
        model = MODELS[name]()
        gens = build_generators(model)
        rng = random.Random(7)
        for gen in gens:
            for _ in range(5):
                p = _sample_point(rng, model.d)
                try:
                    q = apply_generator(gen, p)
                    back = apply_generator(gen, q)
                except PoleError:
                    continue
                assert back == p

    def test_generator_fixes_critical_point(self):
        model = MODELS["order6"]()
        cp = critical_point(model)
        gens = build_generators(model)
        x0 = tuple(F(v).limit_denominator(10**6) for v in cp.x0)
        for gen in gens:
            img = apply_generator(gen, x0)
            for a, b in zip(img, x0):
                assert abs(float(a) - float(b)) < 1e-5


class TestKnownOrders:
    def test_golden_orders(self, golden_finite, golden_orders):
        for name, model in golden_finite.items():
            v = group_order(model, bound=32, seed=model_seed(model))
            assert v.finite and v.order == golden_orders[name], name

    def test_infinite_exemplar(self):
        v = group_order(INFINITE_EXEMPLAR, bound=32,
                        seed=model_seed(INFINITE_EXEMPLAR))
        assert not v.finite

    def test_gessel_finite(self):
        v = group_order(MODELS["gessel"](), bound=32, seed=3)
        assert v.finite and v.order == 8

    def test_b3_models(self):
        for name in ("b3-model1", "b3-model2"):
            m = MODELS[name]()
            v = group_order(m, bound=64, seed=model_seed(m))
            assert v.finite and v.order == 48, name


class TestPairOrders:
    def test_2d_group_is_dihedral(self, golden_finite):
        for name, model in golden_finite.items():
            g = group_order(model, bound=32, seed=model_seed(model))
            p = pair_order(model, 0, 1, bound=32, seed=model_seed(model))
            assert p.finite and g.order == 2 * p.order, name

    def test_b3_triplet(self):
        m = b3_model1()
        orders = [pair_order(m, i, j, bound=32, seed=11).order
                  for (i, j) in ((0, 1), (0, 2), (1, 2))]
        assert orders == [3, 2, 4]


class TestCentralWeightingInvariance:
    @given(st.integers(1, 9), st.integers(1, 9), st.integers(1, 9),
           st.integers(1, 9), st.integers(1, 9), st.integers(1, 9))
    @settings(max_examples=12, deadline=None)
    def test_order_preserved(self, a, b, c, d, e, f):
        base = MODELS["order8"]()
        rw = central_weighting(base, F(a, b), (F(c, d), F(e, f)))
        v = group_order(rw, bound=32, seed=model_seed(rw))
        assert v.finite and v.order == 8

    def test_order_preserved_infinite(self):
        rw = central_weighting(INFINITE_EXEMPLAR, F(2, 3), (F(5, 4), F(1, 7)))
        assert not group_order(rw, bound=16, seed=model_seed(rw)).finite


class TestMatrixRepresentation:
    def test_matrix_order_matches_orbit_order(self, golden_finite,
                                              golden_orders):
        for name, model in golden_finite.items():
            cp = critical_point(model)
            rep = jacobians_at(model, cp.x0)
            v = matrix_group_order(rep, bound=32)
            assert v.finite and v.order == golden_orders[name], name

    def test_matrix_generators_are_involutions(self):
        import numpy as np

        model = MODELS["order10"]()
        cp = critical_point(model)
        rep = jacobians_at(model, cp.x0)
        for i in range(model.d):
            mat = rep.matrix(i)
            assert np.allclose(mat @ mat, np.eye(2), atol=1e-9)


class TestDeterminism:
    def test_same_seed_same_verdict(self):
        m = MODELS["order6"]()
        a = group_order(m, bound=32, seed=123)
        b = group_order(m, bound=32, seed=123)
        assert (a.finite, a.order) == (b.finite, b.order)

    def test_random_central_weightings_keep_orders(self):
        expected = {"simple": 4, "kreweras": 6, "order4": 4, "order6": 6,
                    "order8": 8, "order10": 10}
        for name, model in random_central_weightings(6, seed=99):
            v = group_order(model, bound=32, seed=model_seed(model))
            assert v.finite and v.order == expected[name], name
