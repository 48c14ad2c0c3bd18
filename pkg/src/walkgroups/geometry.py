"""Geometry of a walk model: critical point, covariance, reflection group.

Under the no-half-space hypothesis the inventory chi has a unique critical
point x0 in the open positive orthant; reweighting the steps by x0^s / chi(x0)
kills the drift. The correlations a_ij of the reweighted steps define the
covariance matrix Delta, and the image of the orthant under Delta^{-1/2} is a
cone whose facet reflections generate a group H. When the pairwise dihedral
orders m_ij are finite, H is a Coxeter group; the model has the Weyl property
iff its m-triplet is of reflection type and a_ij = -cos(pi/m_ij).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import acos, cos, pi

import numpy as np

from .models import ModelError, check_H1


class GeometryError(RuntimeError):
    """Raised on solver failure or degenerate second moments."""


def chi_value(model, x):
    """chi at a positive float point."""
    x = np.asarray(x, dtype=float)
    acc = 0.0
    for step, w in model.weights.items():
        term = float(w)
        for xv, e in zip(x, step):
            if e == 1:
                term *= xv
            elif e == -1:
                term /= xv
        acc += term
    return acc


def chi_grad(model, x):
    """Gradient (d chi / d x_i) at a positive float point."""
    x = np.asarray(x, dtype=float)
    g = np.zeros(model.d)
    for step, w in model.weights.items():
        term = float(w)
        for xv, e in zip(x, step):
            if e == 1:
                term *= xv
            elif e == -1:
                term /= xv
        for i, e in enumerate(step):
            if e:
                g[i] += term * e / x[i]
    return g


def chi_hess(model, x):
    """Hessian (d^2 chi / d x_i d x_j) at a positive float point."""
    x = np.asarray(x, dtype=float)
    h = np.zeros((model.d, model.d))
    for step, w in model.weights.items():
        term = float(w)
        for xv, e in zip(x, step):
            if e == 1:
                term *= xv
            elif e == -1:
                term /= xv
        for i in range(model.d):
            ei = step[i]
            if ei == 0:
                continue
            h[i, i] += term * ei * (ei - 1) / (x[i] * x[i])
            for j in range(i + 1, model.d):
                ej = step[j]
                if ej:
                    h[i, j] += term * ei * ej / (x[i] * x[j])
    for i in range(model.d):
        for j in range(i + 1, model.d):
            h[j, i] = h[i, j]
    return h


@dataclass(frozen=True)
class CriticalPoint:
    x0: tuple
    residual: float
    iterations: int

    def __iter__(self):
        return iter(self.x0)


def critical_point(model, tol=1e-12, max_iter=80):
    """Solve grad chi = 0 by Newton's method in u = log x.

    chi(e^u) = sum w(s) e^{<s,u>} is strictly convex and coercive in u under
    the no-half-space hypothesis, so Newton from u = 0 with Armijo step
    halving converges globally.
    """
    h1 = check_H1(model)
    if not h1.satisfied:
        raise GeometryError(
            f"no critical point: steps lie in the half-space of {h1.witness}"
        )
    steps = np.array(model.steps(), dtype=float)
    weights = np.array([float(model.weights[tuple(map(int, s))]) for s in steps])
    u = np.zeros(model.d)

    def parts(uvec):
        expo = np.exp(steps @ uvec)
        f = float(weights @ expo)
        g = steps.T @ (weights * expo)
        h = (steps * (weights * expo)[:, None]).T @ steps
        return f, g, h

    for it in range(1, max_iter + 1):
        f, g, h = parts(u)
        x = np.exp(u)
        grad_x = g / x
        residual = float(np.linalg.norm(grad_x))
        if residual <= tol:
            return CriticalPoint(tuple(x), residual, it - 1)
        try:
            p = np.linalg.solve(h, -g)
        except np.linalg.LinAlgError as exc:
            raise GeometryError(f"singular Hessian in Newton step: {exc}") from None
        slope = float(g @ p)
        # allowance of a few ulps of f: near the minimum the true decrease
        # drops below float resolution and the full Newton step must pass
        noise = 1e-14 * abs(f)
        gamma = 1.0
        while gamma > 1e-14:
            f_new = float(weights @ np.exp(steps @ (u + gamma * p)))
            if f_new <= f + 0.25 * gamma * slope + noise:
                break
            gamma *= 0.5
        u = u + gamma * p
    raise GeometryError(f"Newton did not reach tol={tol} in {max_iter} iterations")


@dataclass(frozen=True)
class CovarianceData:
    """Correlation matrix Delta of the x0-reweighted steps, with Delta^{-1/2}."""

    delta: tuple
    inv_sqrt_delta: tuple
    hess_diag: tuple  # chi_{x_i x_i}(x0), positive under the hypothesis

    def matrix(self):
        return np.array(self.delta, dtype=float)

    def inv_sqrt(self):
        return np.array(self.inv_sqrt_delta, dtype=float)

    def a(self, i, j):
        return self.delta[i][j]


def covariance(model, x0):
    """a_ij = chi_{x_i x_j}(x0) / sqrt(chi_{x_i x_i}(x0) chi_{x_j x_j}(x0)).

    The diagonal is exactly 1 by construction. x0 may be a CriticalPoint or
    a plain coordinate sequence.
    """
    x = np.asarray(tuple(x0), dtype=float)
    h = chi_hess(model, x)
    diag = np.diag(h).copy()
    if np.any(diag <= 0):
        raise GeometryError(f"vanishing second derivative along an axis: diag={diag}")
    scale = 1.0 / np.sqrt(diag)
    delta = h * scale[:, None] * scale[None, :]
    np.fill_diagonal(delta, 1.0)
    inv_sqrt_mat = inv_sqrt(delta)
    return CovarianceData(
        delta=tuple(map(tuple, delta)),
        inv_sqrt_delta=tuple(map(tuple, inv_sqrt_mat)),
        hess_diag=tuple(float(v) for v in diag),
    )


def inv_sqrt(mat):
    """Symmetric positive definite inverse square root via eigendecomposition."""
    m = np.asarray(mat, dtype=float)
    vals, vecs = np.linalg.eigh(m)
    if np.any(vals <= 0):
        raise GeometryError(f"matrix is not positive definite: eigenvalues {vals}")
    return (vecs * (1.0 / np.sqrt(vals))) @ vecs.T


@dataclass(frozen=True)
class PairAngle:
    """Angle data for one pair: theta = arccos(-a_ij)/pi and its best labels."""

    theta: float
    m: int | None  # integer with |theta - 1/m| <= tol, if any
    rational: Fraction | None  # best p/q with q <= qmax within tol, diagnostic


def dihedral_orders(cov, qmax=16, tol=1e-9):
    """Classify each pairwise angle as 1/m, a general rational, or neither."""
    delta = cov.matrix()
    d = delta.shape[0]
    out = {}
    for i in range(d):
        for j in range(i + 1, d):
            theta = acos(max(-1.0, min(1.0, -delta[i, j]))) / pi
            m_val = None
            for m in range(2, qmax + 1):
                if abs(theta - 1.0 / m) <= tol:
                    m_val = m
                    break
            rat = Fraction(theta).limit_denominator(qmax)
            if abs(theta - rat) > tol:
                rat = None
            out[(i, j)] = PairAngle(theta=theta, m=m_val, rational=rat)
    return out


_COXETER_3D = {
    (2, 3, 3): ("A3", 24),
    (2, 3, 4): ("B3", 48),
    (2, 3, 5): ("H3", 120),
}


def _label_from_orders(d, ms):
    """(label, |H|) from the multiset of pairwise orders, or (None, None)."""
    if d == 2:
        q = ms[0]
        return f"D{2 * q}", 2 * q
    if d == 3:
        key = tuple(sorted(ms))
        if key in _COXETER_3D:
            return _COXETER_3D[key]
        if key[0] == 2 and key[1] == 2:
            k = key[2]
            return f"Z2xD{2 * k}", 4 * k
    return None, None


@dataclass(frozen=True)
class ReflectionData:
    normals: tuple  # unit normals of the transformed facet hyperplanes
    reflections: tuple  # orthogonal reflection matrices r_i
    pair_orders: dict  # (i,j) -> m used for the label (exact when provided)
    label: str | None
    group_size: int | None
    weyl: bool

    def reflection(self, i):
        return np.array(self.reflections[i], dtype=float)


def reflection_group(cov, orders=None, qmax=16, tol=1e-9):
    """Reflection group of the cone Delta^{-1/2} R_+^d.

    The facet {x_i = 0} of the orthant maps to the hyperplane with normal
    Delta^{1/2} e_i, so the pairwise normal angles have cosine a_ij. When
    exact pair orders are supplied (from the orbit search) they are the
    source of truth for the Coxeter label; otherwise the label falls back on
    angle recognition. The Weyl flag additionally demands theta_ij = 1/m_ij,
    i.e. a_ij = -cos(pi/m_ij).
    """
    delta = cov.matrix()
    d = delta.shape[0]
    vals, vecs = np.linalg.eigh(delta)
    if np.any(vals <= 0):
        raise GeometryError(f"covariance not positive definite: {vals}")
    sqrt_delta = (vecs * np.sqrt(vals)) @ vecs.T
    normals = []
    refls = []
    for i in range(d):
        n = sqrt_delta[:, i]
        n = n / np.linalg.norm(n)
        normals.append(tuple(float(v) for v in n))
        r = np.eye(d) - 2.0 * np.outer(n, n)
        refls.append(tuple(map(tuple, r)))

    angles = dihedral_orders(cov, qmax=qmax, tol=tol)
    used = {}
    for (i, j), ang in angles.items():
        if orders is not None and (i, j) in orders:
            used[(i, j)] = int(orders[(i, j)])
        elif d == 2 and ang.rational is not None:
            used[(i, j)] = ang.rational.denominator
        elif ang.m is not None:
            used[(i, j)] = ang.m
        else:
            used[(i, j)] = None

    ms = [used[k] for k in sorted(used)]
    if any(m is None for m in ms):
        label, size = None, None
    else:
        label, size = _label_from_orders(d, ms)
    weyl = label is not None and all(
        used[(i, j)] is not None
        and abs(delta[i, j] + cos(pi / used[(i, j)])) <= tol
        for (i, j) in used
    )
    return ReflectionData(
        normals=tuple(normals),
        reflections=tuple(refls),
        pair_orders=used,
        label=label,
        group_size=size,
        weyl=weyl,
    )


_WEYL_PATTERNS = ((2, 3, 3), (2, 3, 4), (2, 3, 5))


@dataclass(frozen=True)
class WeylVerdict:
    weyl: bool
    triplet: tuple  # (m12, m13, m23)
    a_values: dict  # (i,j) -> a_ij
    pattern: str | None  # matched triplet pattern
    reasons: tuple  # failure descriptions, empty when weyl


def weyl_check(model, pair_orders, tol=1e-9):
    """Weyl property for a 3D model given exact pair orders m_ij.

    True iff the sorted m-triplet is (2,2,k) or one of (2,3,3), (2,3,4),
    (2,3,5), and every a_ij equals -cos(pi/m_ij) within tol. pair_orders
    maps (i,j) to the exact order of phi_i phi_j from the orbit search.
    """
    if model.d != 3:
        raise ModelError("weyl_check applies to 3-dimensional models")
    ms = {}
    for key in ((0, 1), (0, 2), (1, 2)):
        if key not in pair_orders:
            raise ModelError(f"missing pair order for {key}")
        val = pair_orders[key]
        order = val.order if hasattr(val, "order") else val
        if order is None:
            return WeylVerdict(
                weyl=False,
                triplet=(None, None, None),
                a_values={},
                pattern=None,
                reasons=(f"pair order {key} exceeded its bound",),
            )
        ms[key] = int(order)
    triplet = (ms[(0, 1)], ms[(0, 2)], ms[(1, 2)])
    key = tuple(sorted(triplet))
    pattern = None
    if key in _WEYL_PATTERNS:
        pattern = f"({key[0]},{key[1]},{key[2]})"
    elif key[0] == 2 and key[1] == 2:
        pattern = "(2,2,k)"
    reasons = []
    if pattern is None:
        reasons.append(f"triplet {triplet} is not (2,2,k) or (2,3,3)/(2,3,4)/(2,3,5)")
    x0 = critical_point(model)
    cov = covariance(model, x0)
    a_values = {k: cov.a(*k) for k in ms}
    for k, m in ms.items():
        dev = abs(a_values[k] + cos(pi / m))
        if dev > tol:
            reasons.append(
                f"a{k} = {a_values[k]:.12f} differs from -cos(pi/{m}) by {dev:.2e}"
            )
    return WeylVerdict(
        weyl=not reasons,
        triplet=triplet,
        a_values=a_values,
        pattern=pattern,
        reasons=tuple(reasons),
    )
