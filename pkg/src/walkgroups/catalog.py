"""Named reference models and parametric families with finite groups.

2D entries: the classical unweighted lattice walks, the four weighted
models realizing group orders 4, 6, 8, 10, and the parametric families
whose membership tests live in `walkgroups.classify` (family 4a, the
order-8 product family, the order-10 triple).

3D entries: the two A3 families, the two unweighted B3 models, and the
decoupled Z2 x D2k construction (a 2D finite model in the xy-plane plus a
free z-direction).

Weights here are definitional and exact; every builder returns a fresh
WeightedModel.
"""

from dataclasses import dataclass
from fractions import Fraction

from .models import ModelError, WeightedModel

__all__ = [
    "FamilySpec",
    "FAMILIES",
    "MODELS",
    "a3_family1",
    "a3_family2",
    "b3_model1",
    "b3_model2",
    "family_4a",
    "gessel",
    "gessel_reflected",
    "kreweras",
    "kreweras_reflected",
    "order8_family",
    "order10_canonical",
    "order10_triple",
    "reflect_step_axis",
    "simple_walk",
    "weighted_order4",
    "weighted_order6",
    "weighted_order8",
    "weighted_order10",
    "z2_d2k",
]


def reflect_step_axis(model, axis):
    """Mirror image: negate coordinate `axis` of every step."""
    if not 0 <= axis < model.d:
        raise ModelError(f"axis {axis} out of range for dimension {model.d}")
    new = {}
    for step, w in model.weights.items():
        s = list(step)
        s[axis] = -s[axis]
        new[tuple(s)] = w
    return WeightedModel(model.d, new, normalized=model.normalized)


def simple_walk():
    """Unweighted king-free grid walk; group of order 4."""
    return WeightedModel(2, {(1, 0): 1, (-1, 0): 1, (0, 1): 1, (0, -1): 1})


def kreweras():
    """Steps E, N, SW; group of order 6."""
    return WeightedModel(2, {(1, 0): 1, (0, 1): 1, (-1, -1): 1})


def kreweras_reflected():
    """x-mirror of Kreweras (W, N, SE); same group, a12 = -1/2."""
    return reflect_step_axis(kreweras(), 0)


def gessel():
    """Steps E, W, NE, SW; group of order 8."""
    return WeightedModel(2, {(1, 0): 1, (-1, 0): 1, (1, 1): 1, (-1, -1): 1})


def gessel_reflected():
    """x-mirror of Gessel; same group, a12 = -1/sqrt(2)."""
    return reflect_step_axis(gessel(), 0)


def weighted_order4():
    """Seven-step weighted model with group of order 4."""
    return WeightedModel(2, {(-1, 0): 3, (1, 1): 15, (-1, -1): 2, (0, 1): 13,
                             (1, 0): 9, (1, -1): 6, (-1, 1): 5})


def weighted_order6():
    """Six-step weighted model with group of order 6."""
    return WeightedModel(2, {(-1, -1): 1, (1, 1): 7, (0, -1): 2, (0, 1): 7,
                             (1, 0): 5, (1, -1): 1})


def weighted_order8():
    """Four-step weighted model with group of order 8; w(1,0)w(-1,0) = w(1,1)w(-1,-1)."""
    return WeightedModel(2, {(1, 1): 4, (1, 0): 2, (-1, 0): 6, (-1, -1): 3})


def weighted_order10():
    """Seven-step weighted model with group of order 10 (diagonal-symmetric form)."""
    return WeightedModel(2, {(-1, 0): 1, (1, 1): 1, (0, -1): 1, (0, 1): 2,
                             (1, 0): 2, (1, -1): 1, (-1, 1): 1})


_ORDER10_FORMS = ("rightmost", "vertical", "central", "horizontal")


def order10_canonical(form="rightmost"):
    """One of the four reflected copies of the order-10 model.

    `rightmost` is the diagonal-symmetric form; `vertical`, `horizontal`,
    and `central` are its mirror images (x, y, and both axes negated). The
    four copies fall into three classes modulo the x<->y relabeling:
    the diagonal mirror of `vertical` is `horizontal`.
    """
    base = weighted_order10()
    if form == "rightmost":
        return base
    if form == "vertical":
        return reflect_step_axis(base, 0)
    if form == "horizontal":
        return reflect_step_axis(base, 1)
    if form == "central":
        return reflect_step_axis(reflect_step_axis(base, 0), 1)
    raise ModelError(f"unknown order-10 form {form!r}; expected one of {_ORDER10_FORMS}")


def order10_triple():
    """The three order-10 classes: rightmost, vertical mirror, central mirror."""
    return (order10_canonical("rightmost"),
            order10_canonical("vertical"),
            order10_canonical("central"))


def family_4a(a=4, b=1, c=2):
    """Order-8 family on {E, W, SE, NW}: w(1,-1)w(-1,1) = w(1,0)w(-1,0) != 0.

    Built to satisfy the constraint identically: w(1,0) = a, w(-1,0) = b,
    w(1,-1) = c, w(-1,1) = a*b/c.
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if a <= 0 or b <= 0 or c <= 0:
        raise ModelError("family 4a parameters must be positive")
    return WeightedModel(2, {(1, 0): a, (-1, 0): b, (1, -1): c, (-1, 1): a * b / c})


def order8_family(a=4, d=2, b=3):
    """Order-8 family on {NE, E, W, SW}: w(1,0)w(-1,0) = w(1,1)w(-1,-1) != 0.

    w(1,1) = a, (1,0) = d, (-1,-1) = b, and w(-1,0) = a*b/d closes the
    product identity exactly.
    """
    a, d, b = Fraction(a), Fraction(d), Fraction(b)
    if a <= 0 or d <= 0 or b <= 0:
        raise ModelError("order-8 family parameters must be positive")
    return WeightedModel(2, {(1, 1): a, (1, 0): d, (-1, -1): b, (-1, 0): a * b / d})


def a3_family1(c=1):
    """First 3D family with group A3 (order 24, triplet (3,2,3)); c >= 0."""
    c = Fraction(c)
    if c < 0:
        raise ModelError("a3_family1 needs c >= 0")
    weights = {(0, -1, -1): 1, (0, -1, 0): 2, (0, -1, 1): 1, (1, 0, -1): 1,
               (1, 0, 0): 1, (-1, 1, -1): 1, (-1, 1, 0): 1}
    if c > 0:
        weights[(0, 0, -1)] = c
    return WeightedModel(3, weights)


def a3_family2(a=1, b=1, c=1):
    """Second 3D family with group A3; a, b, c >= 0 and not all zero.

    a weighs the 4-cycle x, y/x, z/y, 1/z; b its inverse cycle; c the six
    steps y, 1/y, xz/y, y/(xz), z/x, x/z.
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if a < 0 or b < 0 or c < 0 or (a == 0 and b == 0 and c == 0):
        raise ModelError("a3_family2 needs a, b, c >= 0, not all zero")
    weights = {}
    if a > 0:
        for step in ((1, 0, 0), (-1, 1, 0), (0, -1, 1), (0, 0, -1)):
            weights[step] = weights.get(step, 0) + a
    if b > 0:
        for step in ((-1, 0, 0), (1, -1, 0), (0, 1, -1), (0, 0, 1)):
            weights[step] = weights.get(step, 0) + b
    if c > 0:
        for step in ((0, 1, 0), (0, -1, 0), (1, -1, 1), (-1, 1, -1),
                     (-1, 0, 1), (1, 0, -1)):
            weights[step] = weights.get(step, 0) + c
    return WeightedModel(3, weights)


def b3_model1():
    """First unweighted model with group B3 (order 48, triplet (3,2,4))."""
    return WeightedModel(3, {(0, 1, -1): 1, (0, -1, 1): 1, (1, -1, 0): 1,
                             (-1, 1, 0): 1, (-1, 0, 0): 1, (1, 0, 0): 1})


def b3_model2():
    """Second unweighted model with group B3."""
    return WeightedModel(3, {(1, 0, -1): 1, (-1, 0, 1): 1, (0, 1, -1): 1,
                             (0, -1, 1): 1, (-1, 1, -1): 1, (1, -1, 1): 1,
                             (0, 0, 1): 1, (0, 0, -1): 1})


_D2K_XY = {2: simple_walk, 3: kreweras_reflected, 4: gessel_reflected}


def z2_d2k(k):
    """Decoupled 3D model with group Z2 x D2k, k in {2, 3, 4}.

    A 2D model of group order 2k in the xy-plane (with non-positive a12)
    plus free +-z steps. k = 5 is impossible: the order-10 xy models have
    a12 = -cos(2*pi/5), which fails the reflection-angle condition.
    """
    if k not in _D2K_XY:
        raise ModelError(f"k must be one of {sorted(_D2K_XY)}, got {k}")
    weights = {(0, 0, 1): Fraction(1), (0, 0, -1): Fraction(1)}
    for (i, j), w in _D2K_XY[k]().weights.items():
        weights[(i, j, 0)] = w
    return WeightedModel(3, weights)


@dataclass(frozen=True)
class FamilySpec:
    """A parametric family with its expected group data.

    build(*parameters) instantiates a member; default_parameters give the
    canonical instance. expected_triplet is None for 2D families.
    """

    family_id: str
    build: callable
    default_parameters: tuple
    expected_order: int
    expected_triplet: tuple = None
    description: str = ""

    def default_models(self):
        """Canonical instances (one per default parameter tuple)."""
        return tuple(self.build(*p) for p in self.default_parameters)


FAMILIES = {
    "4a": FamilySpec(
        "4a", family_4a, ((4, 1, 2), (1, 1, 1), (Fraction(1, 2), 3, 5)), 8,
        description="E/W/SE/NW with w(1,-1)w(-1,1) = w(1,0)w(-1,0)"),
    "order8-third-model": FamilySpec(
        "order8-third-model", order8_family, ((4, 2, 3), (1, 1, 1), (2, 5, 7)), 8,
        description="NE/E/W/SW with w(1,0)w(-1,0) = w(1,1)w(-1,-1)"),
    "order10-triple": FamilySpec(
        "order10-triple", order10_canonical,
        (("rightmost",), ("vertical",), ("central",)), 10,
        description="the three isolated order-10 classes"),
    "A3-family1": FamilySpec(
        "A3-family1", a3_family1, ((0,), (1,), (Fraction(7, 2),)), 24, (3, 2, 3),
        description="seven-step A3 family, parameter c >= 0"),
    "A3-family2": FamilySpec(
        "A3-family2", a3_family2, ((1, 1, 1), (0, 0, 1), (2, 1, 0)), 24, (3, 2, 3),
        description="three-parameter A3 family, a, b, c >= 0 not all 0"),
    "B3-model1": FamilySpec(
        "B3-model1", b3_model1, ((),), 48, (3, 2, 4),
        description="unweighted six-step B3 model"),
    "B3-model2": FamilySpec(
        "B3-model2", b3_model2, ((),), 48, (3, 2, 4),
        description="unweighted eight-step B3 model"),
    "Z2xD2k": FamilySpec(
        "Z2xD2k", z2_d2k, ((2,), (3,), (4,)), None,
        description="decoupled xy-model of order 2k plus free z steps"),
}


MODELS = {
    "simple": simple_walk,
    "kreweras": kreweras,
    "kreweras-reflected": kreweras_reflected,
    "gessel": gessel,
    "gessel-reflected": gessel_reflected,
    "order4": weighted_order4,
    "order6": weighted_order6,
    "order8": weighted_order8,
    "order10": weighted_order10,
    "b3-model1": b3_model1,
    "b3-model2": b3_model2,
}
