"""Census, family verifiers, 3D Weyl reports, and the search driver."""

import random
from fractions import Fraction as F

import pytest

from walkgroups.catalog import (
    MODELS,
    a3_family1,
    a3_family2,
    b3_model1,
    family_4a,
    order8_family,
    order10_canonical,
    z2_d2k,
)
from walkgroups.classify import (
    CensusMismatch,
    classify3d_check,
    enumerate_2d_unweighted,
    search3d,
    verify_A3_B3_families,
    verify_family_4a,
    verify_order8_family,
    verify_order10_models,
)
from walkgroups.models import ModelError, WeightedModel, central_weighting

EXPECTED_FILTER_COUNTS = {
    "x_unconstrained": 31,
    "y_unconstrained": 24,
    "x_frozen": 22,
    "y_frozen": 17,
    "x_dominates": 8,
    "y_dominates": 7,
    "antidiagonal_trapped": 8,
}


@pytest.fixture(scope="module")
def reduced():
    return enumerate_2d_unweighted(mode="reduced")


class TestCensus:
    def test_classical_counts(self, reduced):
        assert len(reduced.classes) == 79
        assert reduced.finite == 23
        assert reduced.singular == 5
        assert reduced.kept == 138
        assert reduced.total == 255
        assert reduced.order_histogram == {4: 16, 6: 5, 8: 2}

    def test_filter_counts(self, reduced):
        assert dict(reduced.filter_counts) == EXPECTED_FILTER_COUNTS
        dropped = sum(reduced.filter_counts.values())
        assert reduced.total - dropped == reduced.kept

    def test_finite_orders_in_theory_range(self, reduced):
        for entry in reduced.classes:
            if entry.verdict == "finite":
                assert entry.order in (4, 6, 8, 10)
                assert entry.corroborated is True

    def test_raw_mode(self):
        raw = enumerate_2d_unweighted(mode="raw")
        assert len(raw.classes) == 255
        assert raw.singular == 124
        assert raw.finite == 39
        assert raw.order_histogram == {4: 29, 6: 6, 8: 4}

    def test_deterministic_across_jobs(self, reduced):
        parallel = enumerate_2d_unweighted(mode="reduced", jobs=2)
        assert parallel.to_dict() == reduced.to_dict()

    def test_bad_mode_rejected(self):
        with pytest.raises(ModelError):
            enumerate_2d_unweighted(mode="everything")

    def test_drifted_counts_fail_loudly(self, monkeypatch):
        import walkgroups.classify as classify_mod

        wrong = dict(classify_mod.EXPECTED_CENSUS)
        wrong["finite"] = 24
        monkeypatch.setattr(classify_mod, "EXPECTED_CENSUS", wrong)
        with pytest.raises(CensusMismatch) as excinfo:
            enumerate_2d_unweighted(mode="reduced")
        assert excinfo.value.filter_counts == EXPECTED_FILTER_COUNTS
        assert "filter counts" in str(excinfo.value)


class TestFamily4a:
    def test_builder_instances_accepted(self):
        for a, b, c in ((4, 1, 2), (1, 1, 1), (F(1, 2), 3, 5)):
            assert verify_family_4a(family_4a(a, b, c))

    def test_central_weightings_accepted(self):
        rng = random.Random(5)
        base = family_4a(4, 1, 2)
        for _ in range(5):
            mu = F(rng.randint(1, 9), rng.randint(1, 9))
            alpha = [F(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(2)]
            assert verify_family_4a(central_weighting(base, mu, alpha))

    def test_perturbed_rejected(self):
        base = family_4a(4, 1, 2)
        weights = dict(base.weights)
        weights[(1, 0)] += F(1, 100)
        assert not verify_family_4a(WeightedModel(2, weights))

    def test_wrong_support_rejected(self):
        assert not verify_family_4a(MODELS["kreweras"]())


class TestOrder8Family:
    def test_builder_instances_accepted(self):
        for a, d, b in ((4, 2, 3), (1, 1, 1), (2, 5, 7)):
            assert verify_order8_family(order8_family(a, d, b))

    def test_perturbed_rejected(self):
        base = order8_family(4, 2, 3)
        weights = dict(base.weights)
        weights[(1, 1)] += F(1, 50)
        assert not verify_order8_family(WeightedModel(2, weights))


class TestOrder10Models:
    def test_all_four_forms_accepted(self):
        for form in ("rightmost", "vertical", "central", "horizontal"):
            assert verify_order10_models(order10_canonical(form)), form

    def test_reflection_closure(self):
        # membership is stable under the vertical/central reflections used
        # to generate the forms
        m = order10_canonical("rightmost")
        refl = WeightedModel(2, {(-s[0], s[1]): w for s, w in m.weights.items()})
        assert verify_order10_models(refl)

    def test_central_weightings_accepted(self):
        rng = random.Random(6)
        for form in ("rightmost", "vertical", "central"):
            base = order10_canonical(form)
            for _ in range(4):
                mu = F(rng.randint(1, 9), rng.randint(1, 9))
                alpha = [F(rng.randint(1, 9), rng.randint(1, 9))
                         for _ in range(2)]
                assert verify_order10_models(central_weighting(base, mu, alpha))

    def test_near_misses_rejected(self):
        rng = random.Random(7)
        base = order10_canonical("rightmost")
        for _ in range(6):
            weights = dict(base.weights)
            step = rng.choice(sorted(weights))
            weights[step] += F(1, rng.randint(7, 30))
            assert not verify_order10_models(WeightedModel(2, weights))

    def test_wrong_support_rejected(self):
        assert not verify_order10_models(MODELS["gessel"]())


class TestClassify3D:
    def test_b3_model1_report(self):
        rep = classify3d_check(b3_model1())
        assert rep.weyl
        assert sorted(rep.triplet) == [2, 3, 4]
        assert rep.list_entry == "(D6,D4,D8)"
        assert len(rep.slices) == 9
        assert all(s.matches_triplet for s in rep.slices)

    def test_a3_family2_default(self):
        rep = classify3d_check(a3_family2(1, 1, 1))
        assert rep.weyl
        assert sorted(rep.triplet) == [2, 3, 3]
        assert rep.list_entry == "(D6,D4,D6)"

    def test_z2_d2k_entries(self):
        for k in (2, 3, 4):
            rep = classify3d_check(z2_d2k(k))
            assert rep.weyl
            assert sorted(rep.triplet) == [2, 2, k]
            assert rep.list_entry == f"(D4,D4,D{2 * k})"

    def test_positive_a12_fails_condition_two(self):
        # unreflected Kreweras embedded in the xy-plane: m12 = 3 finite, but
        # a12 = +1/2 rather than -cos(pi/3)
        kre = MODELS["kreweras"]()
        weights = {(s[0], s[1], 0): w for s, w in kre.weights.items()}
        weights[(0, 0, 1)] = F(1)
        weights[(0, 0, -1)] = F(1)
        rep = classify3d_check(WeightedModel(3, weights))
        assert not rep.weyl
        assert rep.reasons

    def test_h1_violation_raises(self):
        m = WeightedModel(3, {(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1})
        with pytest.raises(ModelError):
            classify3d_check(m)


class TestVerifyFamilies:
    def test_a3_family1_parameters(self):
        for c in (0, 1, F(7, 2)):
            assert verify_A3_B3_families("A3-family1", parameters=(c,))

    def test_a3_family2_boundary(self):
        assert verify_A3_B3_families("A3-family2", parameters=(0, 0, 1))

    def test_b3_models_default(self):
        assert verify_A3_B3_families("B3-model1")
        assert verify_A3_B3_families("B3-model2")

    def test_z2_d2k_defaults(self):
        assert verify_A3_B3_families("Z2xD2k")

    def test_wrong_dimension_rejected(self):
        with pytest.raises(ModelError):
            verify_A3_B3_families("4a")


class TestSearch3D:
    def test_singleton_b3_support(self):
        hits = search3d(6, support_mask=b3_model1().steps())
        assert len(hits) == 1
        assert hits[0].model.support() == b3_model1().support()
        assert sorted(hits[0].triplet) == [2, 3, 4]

    def test_no_small_models_satisfy_h1(self):
        # 3 steps cannot positively span R^3, so nothing reaches the group work
        hits = search3d(3)
        assert hits == []

    def test_a3_family_sweep_is_truthful(self):
        support = sorted(a3_family1(1).support())
        hits = search3d(
            8,
            support_mask=support,
            weight_choices={(0, 0, -1): (1, 2), (0, -1, 0): (2,)},
        )
        # the three family members (c = 0, 1, 2) are among the hits; the
        # sweep also finds genuine Weyl models on sub-supports
        supports = [h.model for h in hits]
        for c in (0, 1, 2):
            member = a3_family1(c)
            assert any(m.weights == member.weights for m in supports)
        assert len(hits) == 7
        for h in hits:
            again = classify3d_check(h.model)
            assert again.weyl

    def test_space_limit_enforced(self):
        with pytest.raises(ModelError):
            search3d(13, space_limit=1000)
