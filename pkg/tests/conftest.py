"""Shared fixtures: golden models and seeded random model generators."""

import random
from fractions import Fraction as F
from itertools import combinations, product

import pytest

from walkgroups.catalog import MODELS
from walkgroups.groups import group_order
from walkgroups.models import WeightedModel, central_weighting, check_H1, model_seed

# The six named finite 2D models: unit-weight classics plus one weighted
# representative of each dihedral order.
GOLDEN_FINITE_NAMES = ("simple", "kreweras", "order4", "order6", "order8", "order10")

# Unit-weight steps E, W, N, S, NE: the standard example whose group is
# infinite (r(t) drifts with t).
INFINITE_EXEMPLAR = WeightedModel(
    2, {(1, 0): 1, (-1, 0): 1, (0, 1): 1, (0, -1): 1, (1, 1): 1})

_STEPS_2D = tuple(s for s in product((-1, 0, 1), repeat=2) if s != (0, 0))


@pytest.fixture(scope="session")
def golden_finite():
    return {name: MODELS[name]() for name in GOLDEN_FINITE_NAMES}


@pytest.fixture(scope="session")
def golden_orders():
    return {"simple": 4, "kreweras": 6, "order4": 4, "order6": 6,
            "order8": 8, "order10": 10}


def random_fraction(rng, lo=1, hi=9):
    return F(rng.randint(lo, hi), rng.randint(lo, hi))


def random_central_weightings(n, seed=2024):
    """n central weightings of the golden finite models, cycled.

    Central weightings preserve the group exactly, so each carries its base
    model's order as ground truth.
    """
    rng = random.Random(seed)
    out = []
    names = GOLDEN_FINITE_NAMES
    for k in range(n):
        base = MODELS[names[k % len(names)]]()
        mu = random_fraction(rng)
        alpha = [random_fraction(rng) for _ in range(base.d)]
        out.append((names[k % len(names)], central_weighting(base, mu, alpha)))
    return out


def random_h1_model(rng, min_steps=3, max_steps=8):
    """One random weighted 2D model satisfying the half-space condition."""
    while True:
        size = rng.randint(min_steps, max_steps)
        support = rng.sample(_STEPS_2D, size)
        model = WeightedModel(
            2, {s: F(rng.randint(1, 9)) for s in support})
        if check_H1(model):
            return model


_STEPS_3D = tuple(s for s in product((-1, 0, 1), repeat=3) if s != (0, 0, 0))


def random_h1_model_3d(rng, min_steps=4, max_steps=10):
    """One random weighted 3D model satisfying the half-space condition."""
    while True:
        size = rng.randint(min_steps, max_steps)
        support = rng.sample(_STEPS_3D, size)
        model = WeightedModel(
            3, {s: F(rng.randint(1, 9)) for s in support})
        if check_H1(model):
            return model


def random_infinite_models(n, seed=2025, bound=16):
    """n random weighted H1 models whose orbit search exceeds `bound`."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        model = random_h1_model(rng)
        verdict = group_order(model, bound=bound, seed=model_seed(model))
        if not verdict.finite:
            out.append(model)
    return out


@pytest.fixture(scope="session")
def random_finite_pool():
    return random_central_weightings(10)


@pytest.fixture(scope="session")
def random_infinite_pool():
    return random_infinite_models(10)


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance-criteria verdict lines after the test summary."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
