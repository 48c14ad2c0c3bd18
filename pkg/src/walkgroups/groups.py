"""The group of a walk model: birational involutions and exact orbit search.

The inventory decomposes along each coordinate as
chi = x_i A_i(others) + B_i(others) + (1/x_i) C_i(others), and the group is
generated by the involutions phi_i which replace x_i by C_i/(A_i x_i).
Word equality is decided by exact evaluation at several random rational
points; two reduced words are identified iff their images agree on every
sample point. Distinct states never exceed the group order, so exceeding the
search bound is a certificate that the group is larger than the bound, while
finiteness verdicts are re-verified on an independent point set.
"""

from dataclasses import dataclass
from fractions import Fraction
import random

import numpy as np

from .models import ModelError, check_H1, model_seed


class GroupError(RuntimeError):
    """Group computation failed (degenerate input or sampling trouble)."""


class PoleError(GroupError):
    """A sample point hit a pole of some generator; resample."""


@dataclass(frozen=True)
class BirationalGenerator:
    """phi_index: x_index -> C/(A * x_index), other coordinates fixed.

    A, B, C are sparse Laurent tables in the other coordinates, stored as
    maps from full-dimension exponent tuples (the index slot is zero) to
    positive Fractions.
    """

    index: int
    A: tuple
    B: tuple
    C: tuple

    def tables(self):
        return {"A": dict(self.A), "B": dict(self.B), "C": dict(self.C)}


@dataclass(frozen=True)
class GroupVerdict:
    """Outcome of an orbit search: Finite(order) or ExceedsBound(bound)."""

    finite: bool
    order: int | None
    bound: int
    certificate: tuple = ()

    def __repr__(self):
        if self.finite:
            return f"Finite({self.order})"
        return f"ExceedsBound({self.bound})"


@dataclass(frozen=True)
class JacobianRep:
    """Differentials of the generators at the critical point x0."""

    x0: tuple
    matrices: tuple  # tuple of d float matrices as nested tuples
    involution_residual: float

    def matrix(self, i):
        return np.array(self.matrices[i], dtype=float)


def build_generators(model):
    """Decompose chi along each coordinate and return the d involutions."""
    gens = []
    for i in range(model.d):
        a, b, c = {}, {}, {}
        for step, w in model.weights.items():
            key = tuple(0 if j == i else e for j, e in enumerate(step))
            target = a if step[i] == 1 else (c if step[i] == -1 else b)
            target[key] = target.get(key, Fraction(0)) + w
        if not a or not c:
            raise GroupError(
                f"coordinate {i}: chi has no x_{i}^{{+1}} or x_{i}^{{-1}} part; "
                "the step set lies in a half-space"
            )
        gens.append(
            BirationalGenerator(
                index=i,
                A=tuple(sorted(a.items())),
                B=tuple(sorted(b.items())),
                C=tuple(sorted(c.items())),
            )
        )
    return gens


def _eval_table(table, point):
    acc = Fraction(0)
    for expo, coef in table:
        term = coef
        for x, e in zip(point, expo):
            if e == 1:
                term = term * x
            elif e == -1:
                term = term / x
        acc += term
    return acc


def apply_generator(gen, point):
    """Exact image of a rational point under phi_index.

    Raises PoleError when the denominator A vanishes at the point or the
    image would acquire a zero coordinate.
    """
    a = _eval_table(gen.A, point)
    if a == 0:
        raise PoleError(f"A_{gen.index} vanishes at sample point")
    c = _eval_table(gen.C, point)
    if c == 0:
        raise PoleError(f"image coordinate {gen.index} would vanish")
    new = list(point)
    new[gen.index] = c / (a * point[gen.index])
    return tuple(new)


def _sample_points(rng, d, count):
    return tuple(
        tuple(Fraction(rng.randint(1, 50), rng.randint(1, 50)) for _ in range(d))
        for _ in range(count)
    )


def _orbit_bfs(gens, points, bound):
    """BFS over reduced words; states are joint images of the sample points.

    Returns (order or None, milestones); None means the state count exceeded
    the bound, which certifies |G| > bound since distinct states are distinct
    group elements.
    """
    start = points
    seen = {start}
    frontier = [(start, -1)]
    milestones = []
    length = 0
    while frontier:
        length += 1
        new_frontier = []
        for state, first in frontier:
            for gen in gens:
                if gen.index == first:
                    continue
                image = tuple(apply_generator(gen, p) for p in state)
                if image not in seen:
                    seen.add(image)
                    if len(seen) > bound:
                        milestones.append((length, len(seen)))
                        return None, tuple(milestones)
                    new_frontier.append((image, gen.index))
        milestones.append((length, len(seen)))
        frontier = new_frontier
    return len(seen), tuple(milestones)


def _checked_search(model, searcher, bound, test_points, seed, max_retries=8):
    """Run `searcher` on fresh point sets until two independent runs agree.

    ExceedsBound is returned immediately (it is a certificate, not a guess).
    """
    if seed is None:
        seed = model_seed(model)
    gens = build_generators(model)
    rng = random.Random(seed)
    verdicts = []
    attempts = 0
    while attempts < max_retries:
        attempts += 1
        points = _sample_points(rng, model.d, test_points)
        try:
            result, cert = searcher(gens, points, bound)
        except PoleError:
            continue
        if result is None:
            return GroupVerdict(False, None, bound, cert)
        verdicts.append((result, cert))
        if len(verdicts) >= 2:
            if verdicts[-1][0] == verdicts[-2][0]:
                return GroupVerdict(True, result, bound, cert)
            verdicts.clear()  # disagreement: both runs are suspect
    raise GroupError(
        f"orbit search failed to stabilize after {max_retries} point sets "
        "(persistent poles or sampling collisions)"
    )


def group_order(model, bound=64, test_points=3, seed=None):
    """Order of the group generated by all d involutions, within `bound`."""
    if test_points < 3:
        raise ModelError("need at least 3 test points")
    if bound < 2:
        raise ModelError("bound must be >= 2")
    h1 = check_H1(model)
    if not h1.satisfied:
        raise GroupError(f"hypothesis fails: witness direction {h1.witness}")
    return _checked_search(model, _orbit_bfs, bound, test_points, seed)


def pair_order(model, i, j, bound=32, test_points=3, seed=None):
    """Order of the composition phi_i phi_j (the dihedral invariant m_ij)."""
    if i == j:
        raise ModelError("pair_order needs two distinct indices")
    h1 = check_H1(model)
    if not h1.satisfied:
        raise GroupError(f"hypothesis fails: witness direction {h1.witness}")

    def searcher(gens, points, bnd):
        gi, gj = gens[i], gens[j]
        state = points
        milestones = []
        for m in range(1, bnd + 1):
            state = tuple(apply_generator(gj, p) for p in state)
            state = tuple(apply_generator(gi, p) for p in state)
            milestones.append((m, int(state == points)))
            if state == points:
                return m, tuple(milestones)
        return None, tuple(milestones)

    return _checked_search(model, searcher, bound, test_points, seed)


def _eval_table_float(table, x):
    acc = 0.0
    for expo, coef in table:
        term = float(coef)
        for xv, e in zip(x, expo):
            if e == 1:
                term *= xv
            elif e == -1:
                term /= xv
        acc += term
    return acc


def _eval_table_partial_float(table, x, j):
    """d/dx_j of the Laurent table at x."""
    acc = 0.0
    for expo, coef in table:
        e_j = expo[j]
        if e_j == 0:
            continue
        term = float(coef) * e_j
        for k, (xv, e) in enumerate(zip(x, expo)):
            p = e - 1 if k == j else e
            term *= xv ** p
        acc += term
    return acc


def jacobians_at(model, x0, tol=1e-9):
    """Jacobian matrices of the generators at the common fixed point x0.

    Each phi_i fixes the critical point, and its differential there is an
    involutive matrix; the group they generate is the matrix image of G.
    """
    x = np.asarray(x0, dtype=float)
    if x.shape != (model.d,):
        raise ModelError(f"x0 must have {model.d} coordinates")
    gens = build_generators(model)
    mats = []
    worst_fix = 0.0
    for gen in gens:
        a = _eval_table_float(gen.A, x)
        c = _eval_table_float(gen.C, x)
        i = gen.index
        image = c / (a * x[i])
        worst_fix = max(worst_fix, abs(image - x[i]) / (1.0 + abs(x[i])))
        mat = np.eye(model.d)
        mat[i, i] = -c / (a * x[i] ** 2)
        for j in range(model.d):
            if j == i:
                continue
            da = _eval_table_partial_float(gen.A, x, j)
            dc = _eval_table_partial_float(gen.C, x, j)
            mat[i, j] = (dc * a - c * da) / (a * a * x[i])
        mats.append(mat)
    if worst_fix > tol:
        raise GroupError(
            f"x0 is not fixed by every generator (residual {worst_fix:.3e}); "
            "pass the critical point of chi"
        )
    inv_residual = max(
        float(np.max(np.abs(m @ m - np.eye(model.d)))) for m in mats
    )
    if inv_residual > 1e-6:
        raise GroupError(f"generator differential fails M^2=I by {inv_residual:.3e}")
    return JacobianRep(
        x0=tuple(float(v) for v in x),
        matrices=tuple(tuple(tuple(row) for row in m) for m in mats),
        involution_residual=inv_residual,
    )


def matrix_group_order(rep, bound=64, tol=1e-8):
    """Order of the matrix group generated by the Jacobians, within `bound`.

    Deduplication is by entrywise distance below tol; a candidate that is
    close to a stored element (within 2 tol) without matching it signals
    that the tolerance cannot separate the group elements.
    """
    gens = [rep.matrix(i) for i in range(len(rep.matrices))]
    elements = [np.eye(gens[0].shape[0])]
    frontier = [elements[0]]
    milestones = []
    length = 0
    while frontier:
        length += 1
        new_frontier = []
        for mat in frontier:
            for g in gens:
                cand = g @ mat
                dists = [float(np.max(np.abs(cand - e))) for e in elements]
                best = min(dists)
                if best < tol:
                    continue
                if best < 2 * tol:
                    raise GroupError(
                        f"matrix dedup ambiguous: nearest distance {best:.3e} "
                        f"is between tol and 2*tol; tighten tol"
                    )
                elements.append(cand)
                if len(elements) > bound:
                    milestones.append((length, len(elements)))
                    return GroupVerdict(False, None, bound, tuple(milestones))
                new_frontier.append(cand)
        milestones.append((length, len(elements)))
        frontier = new_frontier
    return GroupVerdict(True, len(elements), bound, tuple(milestones))
