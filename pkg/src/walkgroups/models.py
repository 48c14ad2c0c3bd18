"""Weighted small-step walk models confined to the d-dimensional orthant.

A model is a finite set of steps in {-1,0,1}^d \\ {0}, each carrying a
strictly positive rational weight. The inventory chi(x) = sum_s w(s) x^s is
the Laurent generating polynomial of the steps; normalized models have
chi(1,...,1) = 1 so the weights are transition probabilities.

Weights are exact Fractions end to end. Floating point enters only in the
geometry and elliptic layers.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
import json
import zlib

from .qlinalg import nullspace, primitive_integer_vector


class ModelError(ValueError):
    """Raised on malformed model documents or invalid constructor input."""


def _as_fraction(value, what="weight"):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ModelError(f"bad {what} {value!r}: {exc}") from None
    raise ModelError(f"bad {what} {value!r}: expected int, Fraction, or 'p/q' string")


def _validate_step(step, d):
    if len(step) != d:
        raise ModelError(f"step {step} has dimension {len(step)}, expected {d}")
    if any(c not in (-1, 0, 1) for c in step):
        raise ModelError(f"step {step} outside {{-1,0,1}}^{d}")
    if all(c == 0 for c in step):
        raise ModelError("zero step is not allowed")
    return tuple(int(c) for c in step)


@dataclass(frozen=True)
class WeightedModel:
    """Immutable weighted step set.

    weights maps step tuples to positive Fractions; steps with zero weight
    are simply absent. The normalized flag asserts sum(weights) == 1 exactly.
    """

    d: int
    weights: dict = field(compare=True)
    normalized: bool = False

    def __post_init__(self):
        if self.d < 1:
            raise ModelError("dimension must be >= 1")
        if not self.weights:
            raise ModelError("model needs at least one step")
        clean = {}
        for step, w in self.weights.items():
            s = _validate_step(tuple(step), self.d)
            if s in clean:
                raise ModelError(f"duplicate step {s}")
            wf = _as_fraction(w)
            if wf <= 0:
                raise ModelError(f"weight of {s} must be positive, got {wf}")
            clean[s] = wf
        object.__setattr__(self, "weights", clean)
        total = sum(clean.values())
        if self.normalized and total != 1:
            raise ModelError(f"normalized flag set but weights sum to {total}")

    def steps(self):
        """Steps in a fixed (lexicographic) order."""
        return sorted(self.weights)

    def weight(self, step):
        return self.weights.get(tuple(step), Fraction(0))

    def total_weight(self):
        return sum(self.weights.values())

    def support(self):
        return frozenset(self.weights)

    def to_dict(self):
        return {
            "d": self.d,
            "steps": [
                [",".join(str(c) for c in s), str(self.weights[s])]
                for s in self.steps()
            ],
            "normalized": self.normalized,
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def parse_model(text):
    """Parse a JSON model document.

    Format: {"d": int, "steps": [["i,j(,k)", "p/q"], ...], "normalized": bool?}
    Weights are rational strings or integers; decimal floats are rejected.
    """
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelError(f"not valid JSON: {exc}") from None
    else:
        doc = text
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    try:
        d = int(doc["d"])
        entries = doc["steps"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"model document needs integer 'd' and 'steps': {exc}") from None
    if not isinstance(entries, list) or not entries:
        raise ModelError("'steps' must be a nonempty list")
    weights = {}
    for entry in entries:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise ModelError(f"step entry {entry!r} must be a [step, weight] pair")
        raw_step, raw_w = entry
        if isinstance(raw_step, str):
            try:
                step = tuple(int(part.strip()) for part in raw_step.split(","))
            except ValueError:
                raise ModelError(f"bad step string {raw_step!r}") from None
        else:
            step = tuple(raw_step)
        if isinstance(raw_w, float):
            raise ModelError(f"weight {raw_w!r} must be exact: use 'p/q' strings")
        step = _validate_step(step, d)
        if step in weights:
            raise ModelError(f"duplicate step {step}")
        w = _as_fraction(raw_w)
        if w == 0:  # "step in S" means weight > 0
            continue
        weights[step] = w
    return WeightedModel(d=d, weights=weights, normalized=bool(doc.get("normalized", False)))


def normalize(model):
    """Divide weights by their exact sum; idempotent."""
    total = model.total_weight()
    if total == 1:
        if model.normalized:
            return model
        return WeightedModel(model.d, dict(model.weights), normalized=True)
    return WeightedModel(
        model.d,
        {s: w / total for s, w in model.weights.items()},
        normalized=True,
    )


def inventory_eval(model, point):
    """Evaluate chi(point) = sum_s w(s) point^s.

    Exact when the coordinates are Fractions/ints; floats work too.
    Raises ModelError on a zero coordinate (Laurent pole).
    """
    if len(point) != model.d:
        raise ModelError(f"point has dimension {len(point)}, model is {model.d}-dimensional")
    if any(x == 0 for x in point):
        raise ModelError("inventory has a pole at zero coordinates")
    acc = 0
    for step, w in model.weights.items():
        term = w
        for x, e in zip(point, step):
            if e == 1:
                term = term * x
            elif e == -1:
                term = term / x
        acc = acc + term
    return acc


@dataclass(frozen=True)
class H1Result:
    satisfied: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.satisfied


def check_H1(model):
    """Decide whether the step set avoids every closed half-space.

    The step set satisfies the hypothesis iff there is no x != 0 with
    <x, s> >= 0 for every step s. The witness set is the dual cone of the
    steps; if it is nonzero it contains either an extreme ray (the 1-dim
    nullspace of d-1 of the steps) or a full line inside span(S)^perp, so
    enumerating nullspace bases of all (d-1)-subsets plus the coordinate
    directions is a complete candidate list. Exact arithmetic throughout.
    """
    steps = model.steps()
    d = model.d
    candidates = []
    for i in range(d):
        e = [Fraction(0)] * d
        e[i] = Fraction(1)
        candidates.append(e)
    size = min(d - 1, len(steps))
    for subset in combinations(steps, size):
        rows = [[Fraction(c) for c in s] for s in subset]
        for vec in nullspace(rows, d):
            candidates.append(vec)
    for cand in candidates:
        for signed in (cand, [-c for c in cand]):
            if all(v == 0 for v in signed):
                continue
            if all(
                sum(x * c for x, c in zip(signed, s)) >= 0 for s in steps
            ):
                return H1Result(False, tuple(primitive_integer_vector(signed)))
    return H1Result(True, None)


def central_weighting(model, mu, alpha):
    """Reweight w(s) -> mu * w(s) * alpha^s; preserves the group of the walk."""
    mu = _as_fraction(mu, "mu")
    alpha = [_as_fraction(a, "alpha") for a in alpha]
    if len(alpha) != model.d:
        raise ModelError(f"alpha has dimension {len(alpha)}, model is {model.d}-dimensional")
    if mu <= 0 or any(a <= 0 for a in alpha):
        raise ModelError("central weighting parameters must be positive")
    new = {}
    for step, w in model.weights.items():
        factor = mu
        for a, e in zip(alpha, step):
            if e == 1:
                factor = factor * a
            elif e == -1:
                factor = factor / a
        new[step] = w * factor
    return WeightedModel(model.d, new, normalized=(sum(new.values()) == 1))


def drift(model):
    """Mean step sum_s w(s) s, exact."""
    out = [Fraction(0)] * model.d
    for step, w in model.weights.items():
        for i, c in enumerate(step):
            if c:
                out[i] += w * c
    return tuple(out)


@dataclass(frozen=True)
class SliceModel:
    """A 2D section of a 3D model at a fixed positive value of one axis."""

    parent: WeightedModel
    axis: int
    z: Fraction
    model: WeightedModel


def slice_model(model, axis, z):
    """Fix `axis` to the positive rational z and collect 2D coefficients.

    The weight of the 2D step (i,j) is w(..,1)*z + w(..,0) + w(..,-1)/z over
    the three possible axis components; steps moving only along the fixed
    axis contribute a constant and are dropped.
    """
    if model.d != 3:
        raise ModelError("slice_model needs a 3-dimensional model")
    if axis not in (0, 1, 2):
        raise ModelError(f"axis must be 0, 1 or 2, got {axis}")
    z = _as_fraction(z, "z")
    if z <= 0:
        raise ModelError("slice value must be positive")
    free = [i for i in range(3) if i != axis]
    acc = {}
    for step, w in model.weights.items():
        proj = (step[free[0]], step[free[1]])
        term = w * z if step[axis] == 1 else (w / z if step[axis] == -1 else w)
        if proj == (0, 0):
            continue
        acc[proj] = acc.get(proj, Fraction(0)) + term
    if not acc:
        raise ModelError("slice is empty: all steps move only along the fixed axis")
    model2d = WeightedModel(2, acc, normalized=(sum(acc.values()) == 1))
    return SliceModel(parent=model, axis=axis, z=z, model=model2d)


def canonical_key(model):
    """Stable textual key used for deterministic ordering and seeding."""
    parts = [str(model.d)]
    for s in model.steps():
        parts.append(",".join(str(c) for c in s) + "=" + str(model.weights[s]))
    return ";".join(parts)


def model_seed(model):
    """Deterministic per-model RNG seed derived from the canonical key."""
    return zlib.crc32(canonical_key(model).encode())
