"""Census of 2D unweighted models and the finite-family classifiers.

2D: ``enumerate_2d_unweighted`` reproduces the classical census of the 255
nonempty step subsets: a reduction pipeline of named filters cuts the list
to the models that genuinely interact with both orthant constraints, the
diagonal relabeling folds them into equivalence classes, and the orbit
search decides finiteness of each class. The expected counts (79 classes,
23 finite with orders 4, 6, 8 only) are enforced loudly: a mismatch raises
``CensusMismatch`` with per-filter diagnostics instead of reporting silently
wrong numbers.

Weighted families: exact membership tests for the two order-8 product
families and the three isolated order-10 models (membership under central
weighting is a rank condition over the step-exponent lattice, decided in
exact arithmetic).

3D: ``classify3d_check`` combines the pair orders m_ij, the covariance
angles, and the 2D groups of the three coordinate slices into a Weyl-property
report; ``search3d`` sweeps constrained step sets for Weyl hits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product

from .catalog import FAMILIES, order10_canonical
from .groups import group_order, pair_order
from .geometry import covariance, critical_point, weyl_check
from .models import (
    ModelError,
    WeightedModel,
    canonical_key,
    check_H1,
    model_seed,
    slice_model,
)
from .qlinalg import left_integer_kernel

__all__ = [
    "CensusMismatch",
    "ClassEntry",
    "Classify2DReport",
    "EXPECTED_CENSUS",
    "FILTERS_2D",
    "SliceGroup",
    "WeylReport3D",
    "classify3d_check",
    "enumerate_2d_unweighted",
    "search3d",
    "verify_A3_B3_families",
    "verify_family_4a",
    "verify_order8_family",
    "verify_order10_models",
]


# ---------------------------------------------------------------------------
# 2D census

_STEPS_2D = (
    (-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1),
)

# Reduction pipeline: a subset is kept iff it triggers none of these. Each
# filter names a way the orthant problem degenerates (a constraint never
# binds, a coordinate cannot grow, one constraint implies the other, or the
# walk cannot leave the origin).
FILTERS_2D = {
    "x_unconstrained": lambda sup: all(s[0] != -1 for s in sup),
    "y_unconstrained": lambda sup: all(s[1] != -1 for s in sup),
    "x_frozen": lambda sup: all(s[0] != 1 for s in sup),
    "y_frozen": lambda sup: all(s[1] != 1 for s in sup),
    "x_dominates": lambda sup: all(s[0] >= s[1] for s in sup),
    "y_dominates": lambda sup: all(s[1] >= s[0] for s in sup),
    "antidiagonal_trapped": lambda sup: all(s[0] + s[1] <= 0 for s in sup),
}

EXPECTED_CENSUS = {
    "kept": 138,
    "classes": 79,
    "singular": 5,
    "finite": 23,
    "order_histogram": {4: 16, 6: 5, 8: 2},
}

_CENSUS_BOUND = 32
_CENSUS_T = Fraction(1, 10)
_FINITE_2D_ORDERS = (4, 6, 8, 10)


class CensusMismatch(RuntimeError):
    """The census pipeline produced counts that contradict the expected ones."""

    def __init__(self, message, filter_counts=None):
        super().__init__(message)
        self.filter_counts = dict(filter_counts or {})


def _mask_support(mask):
    return tuple(s for b, s in enumerate(_STEPS_2D) if mask >> b & 1)


def _support_mask(steps):
    return sum(1 << _STEPS_2D.index(s) for s in steps)


def _diagonal_mask(mask):
    return _support_mask([(j, i) for i, j in _mask_support(mask)])


def _first_filter(support):
    for name, trig in FILTERS_2D.items():
        if trig(support):
            return name
    return None


def _corroborate_order(model, order):
    """Does the period ratio's denominator q satisfy 2q = |G| at t = 1/10?"""
    from .elliptic import EllipticError, r_of_t

    try:
        r = r_of_t(model, _CENSUS_T)
    except EllipticError:
        return False
    cand = Fraction(float(r)).limit_denominator(8)
    return abs(float(r) - float(cand)) <= 1e-9 and 2 * cand.denominator == order


def _census_entry(mask):
    """Verdict tuple for one support; deterministic via per-model seeding."""
    support = _mask_support(mask)
    model = WeightedModel(2, {s: 1 for s in support})
    if not check_H1(model).satisfied:
        return (mask, "singular", None, None)
    verdict = group_order(model, bound=_CENSUS_BOUND, seed=model_seed(model))
    if not verdict.finite:
        return (mask, "exceeds-bound", None, None)
    return (mask, "finite", verdict.order, _corroborate_order(model, verdict.order))


@dataclass(frozen=True)
class ClassEntry:
    """One census class: its representative support and group verdict."""

    mask: int
    steps: tuple
    verdict: str  # "singular" | "finite" | "exceeds-bound"
    order: int | None
    corroborated: bool | None  # elliptic 2q = |G| cross-check, finite only

    def to_dict(self):
        return {
            "steps": [list(s) for s in self.steps],
            "verdict": self.verdict,
            "order": self.order,
            "corroborated": self.corroborated,
        }


@dataclass(frozen=True)
class Classify2DReport:
    mode: str
    total: int
    kept: int
    filter_counts: dict  # filter name -> subsets dropped by it (first match)
    classes: tuple
    singular: int
    finite: int
    order_histogram: dict

    def to_dict(self):
        return {
            "mode": self.mode,
            "total": self.total,
            "kept": self.kept,
            "filter_counts": dict(self.filter_counts),
            "singular": self.singular,
            "finite": self.finite,
            "order_histogram": {str(k): v for k, v in sorted(self.order_histogram.items())},
            "classes": [c.to_dict() for c in self.classes],
        }


def enumerate_2d_unweighted(mode="reduced", jobs=1):
    """Census of all unit-weight 2D models.

    raw: every nonempty subset of the 8 small steps, H1-filtered, each with
    its own orbit-search verdict. reduced: the reduction pipeline plus the
    diagonal x<->y quotient; the resulting counts must reproduce the
    classical census (79 classes, 5 singular, 23 finite with orders in
    {4, 6, 8}) or CensusMismatch is raised.

    jobs > 1 distributes per-class work over processes; verdicts are seeded
    per model, so reports are identical for any job count.
    """
    if mode not in ("raw", "reduced"):
        raise ModelError(f"mode must be 'raw' or 'reduced', got {mode!r}")
    all_masks = range(1, 256)
    filter_counts = {name: 0 for name in FILTERS_2D}
    if mode == "raw":
        masks = list(all_masks)
        kept = len(masks)
    else:
        masks = []
        for mask in all_masks:
            name = _first_filter(_mask_support(mask))
            if name is None:
                masks.append(mask)
            else:
                filter_counts[name] += 1
        kept = len(masks)
        masks = sorted({min(m, _diagonal_mask(m)) for m in masks})

    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_census_entry, masks, chunksize=8))
    else:
        rows = [_census_entry(mask) for mask in masks]
    rows.sort()

    classes = tuple(
        ClassEntry(mask=mask, steps=_mask_support(mask), verdict=verdict,
                   order=order, corroborated=corroborated)
        for mask, verdict, order, corroborated in rows
    )
    singular = sum(1 for c in classes if c.verdict == "singular")
    finite = [c for c in classes if c.verdict == "finite"]
    histogram = {}
    for c in finite:
        histogram[c.order] = histogram.get(c.order, 0) + 1
    report = Classify2DReport(
        mode=mode,
        total=255,
        kept=kept,
        filter_counts=filter_counts,
        classes=classes,
        singular=singular,
        finite=len(finite),
        order_histogram=histogram,
    )

    bad_orders = sorted(o for o in histogram if o not in _FINITE_2D_ORDERS)
    if bad_orders:
        raise CensusMismatch(
            f"finite verdicts with impossible orders {bad_orders}", filter_counts)
    uncorroborated = [c.mask for c in finite if not c.corroborated]
    if uncorroborated:
        raise CensusMismatch(
            f"elliptic cross-check 2q = |G| failed for masks {uncorroborated}",
            filter_counts)
    if mode == "reduced":
        got = {
            "kept": kept,
            "classes": len(classes),
            "singular": singular,
            "finite": len(finite),
            "order_histogram": histogram,
        }
        if got != EXPECTED_CENSUS:
            raise CensusMismatch(
                f"census counts {got} differ from expected {EXPECTED_CENSUS}; "
                f"filter counts {filter_counts}",
                filter_counts)
    return report


# ---------------------------------------------------------------------------
# weighted 2D families

def verify_family_4a(model):
    """Membership in the order-8 family on {E, W, SE, NW}.

    True iff the support is exactly those four steps and
    w(1,-1) w(-1,1) = w(1,0) w(-1,0); such models have group order 8.
    """
    if model.d != 2:
        raise ModelError("verify_family_4a applies to 2-dimensional models")
    if model.support() != frozenset(((1, 0), (-1, 0), (1, -1), (-1, 1))):
        return False
    w = model.weight
    return w((1, -1)) * w((-1, 1)) == w((1, 0)) * w((-1, 0))


def verify_order8_family(model):
    """Membership in the order-8 family on {NE, E, W, SW}.

    True iff the support is exactly those four steps and
    w(1,0) w(-1,0) = w(1,1) w(-1,-1).
    """
    if model.d != 2:
        raise ModelError("verify_order8_family applies to 2-dimensional models")
    if model.support() != frozenset(((1, 1), (1, 0), (-1, 0), (-1, -1))):
        return False
    w = model.weight
    return w((1, 0)) * w((-1, 0)) == w((1, 1)) * w((-1, -1))


def _is_central_weighting_of(model, target):
    """Exact test: model = mu * target with steps rescaled by alpha^s.

    Writing rho_s = w_model(s)/w_target(s), membership means log rho is in
    the column space of the matrix with rows (1, s_1, .., s_d), which holds
    iff prod_s rho_s^{c_s} = 1 for every integer vector c in the left kernel
    of that matrix. The kernel test is exact and accepts memberships whose
    (mu, alpha) are irrational.
    """
    if model.support() != target.support():
        return False
    steps = sorted(target.weights)
    rows = [[Fraction(1)] + [Fraction(c) for c in s] for s in steps]
    for kernel_vec in left_integer_kernel(rows):
        prod = Fraction(1)
        for c, s in zip(kernel_vec, steps):
            if c:
                prod *= (model.weights[s] / target.weights[s]) ** int(c)
        if prod != 1:
            return False
    return True


_ORDER10_FORMS = ("rightmost", "vertical", "central", "horizontal")


def verify_order10_models(model):
    """True iff the model is a central weighting of an order-10 model.

    The acceptance set is the four mirror images of the seven-step order-10
    support (three classes modulo the diagonal relabeling), closed under
    central weightings with arbitrary positive parameters.
    """
    if model.d != 2:
        raise ModelError("verify_order10_models applies to 2-dimensional models")
    return any(
        _is_central_weighting_of(model, order10_canonical(form))
        for form in _ORDER10_FORMS
    )


# ---------------------------------------------------------------------------
# 3D classification

_SLICE_PAIR = {2: (0, 1), 1: (0, 2), 0: (1, 2)}  # fixed axis -> m_ij it probes
_DEFAULT_SLICE_VALUES = (Fraction(1, 2), Fraction(1), Fraction(2))


@dataclass(frozen=True)
class SliceGroup:
    """Group of one 2D coordinate slice at one fixed value."""

    axis: int
    value: Fraction
    order: int | None  # None: exceeded bound or degenerate slice
    admissible: bool  # finite and not the excluded order-10 slice
    matches_triplet: bool | None  # |G_slice| = 2 m_ij; None if m_ij unknown

    def to_dict(self):
        return {
            "axis": self.axis,
            "value": str(self.value),
            "order": self.order,
            "admissible": self.admissible,
            "matches_triplet": self.matches_triplet,
        }


@dataclass(frozen=True)
class WeylReport3D:
    """Weyl-property analysis of a 3D model."""

    model: WeightedModel
    triplet: tuple  # (m12, m13, m23); None entries exceeded the bound
    a_values: dict  # (i,j) -> a_ij
    weyl: bool
    pattern: str | None  # matched triplet pattern
    slices: tuple  # SliceGroup records, axes 2,1,0 at each sampled value
    list_entry: str | None  # matched (G_z, G_y, G_x) entry
    reasons: tuple

    def to_dict(self):
        return {
            "model": self.model.to_dict(),
            "triplet": list(self.triplet),
            "a_values": {f"a{i+1}{j+1}": v for (i, j), v in self.a_values.items()},
            "weyl": self.weyl,
            "pattern": self.pattern,
            "slices": [s.to_dict() for s in self.slices],
            "list_entry": self.list_entry,
            "reasons": list(self.reasons),
        }


_SLICE_LIST_ENTRIES = {
    (4, 4, 4): "(D4,D4,D4)",
    (4, 4, 6): "(D4,D4,D6)",
    (4, 4, 8): "(D4,D4,D8)",
    (4, 6, 6): "(D6,D4,D6)",
    (4, 6, 8): "(D6,D4,D8)",
}


def classify3d_check(model, slice_values=_DEFAULT_SLICE_VALUES, bound=32, tol=1e-9):
    """Weyl-property report for a 3D model.

    Combines the exact pair orders (m12, m13, m23), the covariance angle
    conditions a_ij = -cos(pi/m_ij), and the slice analysis: fixing one
    coordinate at each sampled positive value leaves a 2D model whose group
    order must be 2 m_ij for the complementary pair. Order-10 slices are
    never admissible (no 3D model has an m_ij = 5 slice certificate), while
    an m_ij = 5 triplet entry remains possible at the 3D level.
    """
    if model.d != 3:
        raise ModelError("classify3d_check applies to 3-dimensional models")
    h1 = check_H1(model)
    if not h1.satisfied:
        raise ModelError(
            f"H1 fails: steps lie in the half-space of {h1.witness}")
    base_seed = model_seed(model)
    pair_orders = {}
    for (i, j) in ((0, 1), (0, 2), (1, 2)):
        verdict = pair_order(model, i, j, bound=bound,
                             seed=base_seed + 13 * i + 7 * j)
        pair_orders[(i, j)] = verdict.order if verdict.finite else None
    verdict3 = weyl_check(model, pair_orders, tol=tol)

    slices = []
    for axis in (2, 1, 0):
        m = pair_orders[_SLICE_PAIR[axis]]
        for value in slice_values:
            order = None
            try:
                sliced = slice_model(model, axis, value).model
                sv = group_order(sliced, bound=bound, seed=model_seed(sliced))
                order = sv.order if sv.finite else None
            except (ModelError, RuntimeError):
                order = None
            slices.append(SliceGroup(
                axis=axis,
                value=Fraction(value),
                order=order,
                admissible=order is not None and order != 10,
                matches_triplet=None if m is None else order == 2 * m,
            ))

    list_entry = None
    if verdict3.weyl and all(s.matches_triplet for s in slices):
        key = tuple(sorted(2 * m for m in verdict3.triplet))
        list_entry = _SLICE_LIST_ENTRIES.get(key)
    return WeylReport3D(
        model=model,
        triplet=verdict3.triplet,
        a_values=verdict3.a_values,
        weyl=verdict3.weyl,
        pattern=verdict3.pattern,
        slices=tuple(slices),
        list_entry=list_entry,
        reasons=verdict3.reasons,
    )


def verify_A3_B3_families(family, parameters=None, bound=64):
    """Check a 3D family's Weyl property, triplet, and group order.

    `family` is a FamilySpec or its id string. With parameters, one instance
    is checked; otherwise every default instance. True iff each instance is
    weyl with the family's expected triplet (up to coordinate permutation),
    every slice group matches 2 m_ij, and the orbit search returns the
    family's expected order (24 for A3, 48 for B3, 4k for Z2 x D2k).
    """
    spec = FAMILIES[family] if isinstance(family, str) else family
    models = (
        (spec.build(*parameters),) if parameters is not None
        else spec.default_models()
    )
    for m in models:
        if m.d != 3:
            raise ModelError(f"family {spec.family_id!r} is not 3-dimensional")
        report = classify3d_check(m)
        if not report.weyl or not all(s.matches_triplet for s in report.slices):
            return False
        if spec.expected_triplet is not None and sorted(report.triplet) != sorted(
                spec.expected_triplet):
            return False
        expected = spec.expected_order
        if expected is None:
            ms = sorted(report.triplet)
            if ms[:2] != [2, 2]:
                return False
            expected = 4 * ms[2]
        gv = group_order(m, bound=bound, seed=model_seed(m))
        if not (gv.finite and gv.order == expected):
            return False
    return True


# ---------------------------------------------------------------------------
# 3D search

_ALL_3D_STEPS = tuple(
    s for s in product((-1, 0, 1), repeat=3) if s != (0, 0, 0))


def _canonical_permuted(weights):
    """Representative of a weighted step map modulo coordinate permutations."""
    best = None
    for perm in permutations(range(3)):
        permuted = tuple(sorted(
            ((s[perm[0]], s[perm[1]], s[perm[2]]), w) for s, w in weights))
        if best is None or permuted < best:
            best = permuted
    return best


def search3d(max_steps, support_mask=None, weight_choices=None,
             quotient_permutations=True, bound=32, tol=1e-9,
             space_limit=10 ** 6, slice_values=_DEFAULT_SLICE_VALUES):
    """Sweep constrained 3D models and report every Weyl-property hit.

    Candidates are supports of size <= max_steps inside `support_mask`
    (default: all 26 small steps) with weights drawn per step from
    `weight_choices` (default: unit weights); `quotient_permutations` folds
    the sweep by the six coordinate relabelings. Models failing H1 or
    having a positive off-diagonal covariance entry are discarded before
    the group work. Raises ModelError when the space exceeds `space_limit`.
    """
    steps_pool = tuple(support_mask) if support_mask is not None else _ALL_3D_STEPS
    steps_pool = tuple(dict.fromkeys(tuple(map(int, s)) for s in steps_pool))
    choices = {}
    for s in steps_pool:
        opts = (weight_choices or {}).get(s, (1,))
        opts = tuple(Fraction(w) for w in opts)
        if any(w <= 0 for w in opts):
            raise ModelError(f"weight choices for {s} must be positive")
        choices[s] = opts

    # space size: sum over subsets of the product of per-step choice counts,
    # i.e. truncated elementary symmetric sums of the choice counts
    esym = [1] + [0] * max_steps
    for s in steps_pool:
        c = len(choices[s])
        for k in range(min(max_steps, len(esym) - 1), 0, -1):
            esym[k] += esym[k - 1] * c
    space = sum(esym[1:])
    if space > space_limit:
        raise ModelError(
            f"search space has {space} models, over the limit {space_limit}")

    seen = set()
    hits = []
    for size in range(1, max_steps + 1):
        for support in combinations(steps_pool, size):
            for weights in product(*(choices[s] for s in support)):
                weighted = tuple(zip(support, weights))
                if quotient_permutations:
                    key = _canonical_permuted(weighted)
                    if key in seen:
                        continue
                    seen.add(key)
                model = WeightedModel(3, dict(weighted))
                if not check_H1(model).satisfied:
                    continue
                try:
                    cov = covariance(model, critical_point(model))
                except RuntimeError:
                    continue
                if any(cov.a(i, j) > tol for i in range(3) for j in range(i + 1, 3)):
                    continue
                report = classify3d_check(
                    model, slice_values=slice_values, bound=bound, tol=tol)
                if report.weyl:
                    hits.append(report)
    hits.sort(key=lambda rep: canonical_key(rep.model))
    return hits
