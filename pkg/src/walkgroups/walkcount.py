"""Exact counts of orthant-confined walks by dynamic programming.

The counting operations are a desk-scale oracle: layered forward DP whose
layers are dictionaries over the reachable orthant points, with exact
arithmetic throughout (integer weights stay machine integers; rational
weights propagate as Fraction). ``brute_force_count`` enumerates all |S|^n
step sequences independently of the DP and exists to cross-validate it.

``zero_drift_check`` verifies the critical-point construction: reweighting
step s by x0^s / chi(x0) kills the drift, and rescaling space by
Delta^{-1/2} D^{-1} (D the diagonal of step standard deviations) turns the
step covariance into the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .geometry import covariance, critical_point
from .models import ModelError

__all__ = [
    "CountTable",
    "ZeroDriftCheck",
    "brute_force_count",
    "count_walks",
    "series_terms",
    "walk_table",
    "zero_drift_check",
]


def _as_point(p, d, what):
    pt = tuple(int(c) for c in p)
    if len(pt) != d:
        raise ModelError(f"{what} has dimension {len(pt)}, model is {d}-dimensional")
    if any(c < 0 for c in pt):
        raise ModelError(f"{what} {pt} is outside the orthant")
    return pt


def _exact_weights(model):
    # ints when possible: the all-integer case then runs on machine integers
    out = []
    for step, w in model.weights.items():
        out.append((step, int(w) if w.denominator == 1 else w))
    return out


@dataclass(frozen=True)
class CountTable:
    """Forward DP layers: ``layers[n][Q]`` walks of length n from start to Q.

    Only reachable orthant points are stored, so coordinates never exceed
    start + n. Values are exact (int or Fraction).
    """

    start: tuple
    layers: tuple

    def count(self, end, n=None):
        layer = self.layers[-1 if n is None else n]
        return layer.get(tuple(int(c) for c in end), 0)

    def layer_sum(self, n):
        """Total mass at length n; non-increasing in n for normalized models."""
        return sum(self.layers[n].values())


def walk_table(model, start, n):
    """All counts from `start` up to length n in one forward pass."""
    start = _as_point(start, model.d, "start")
    if n < 0:
        raise ModelError(f"negative walk length {n}")
    steps = _exact_weights(model)
    layers = [{start: 1}]
    for _ in range(int(n)):
        nxt = {}
        for pt, val in layers[-1].items():
            for step, w in steps:
                q = tuple(a + b for a, b in zip(pt, step))
                if min(q) >= 0:
                    nxt[q] = nxt.get(q, 0) + val * w
        layers.append(nxt)
    return CountTable(start=start, layers=tuple(layers))


def count_walks(model, start, end, n):
    """Weighted number of n-step walks start -> end staying in the orthant."""
    end = _as_point(end, model.d, "end")
    return walk_table(model, start, n).count(end)


def series_terms(model, start, end, n_max):
    """Coefficients of t^0..t^n_max of sum_n e(start, end; n) t^n."""
    end = _as_point(end, model.d, "end")
    table = walk_table(model, start, n_max)
    return [table.count(end, n) for n in range(int(n_max) + 1)]


def brute_force_count(model, start, end, n):
    """Independent oracle: explicit recursion over all |S|^n step sequences."""
    start = _as_point(start, model.d, "start")
    end = _as_point(end, model.d, "end")
    steps = _exact_weights(model)

    def go(pt, remaining):
        if remaining == 0:
            return 1 if pt == end else 0
        total = 0
        for step, w in steps:
            q = tuple(a + b for a, b in zip(pt, step))
            if min(q) >= 0:
                sub = go(q, remaining - 1)
                if sub:
                    total += w * sub
        return total

    return go(start, int(n))


@dataclass(frozen=True)
class ZeroDriftCheck:
    """Residuals of the canonical reweighting at the critical point.

    drift_residual: Euclidean norm of the mean step after reweighting by
    x0^s / chi(x0). covariance_residual: max-entry deviation from the
    identity of A Sigma A^T with A = Delta^{-1/2} D^{-1}.
    """

    x0: tuple
    drift_residual: float
    covariance_residual: float
    tol: float

    @property
    def passed(self):
        return self.drift_residual <= self.tol and self.covariance_residual <= self.tol


def zero_drift_check(model, tol=1e-8):
    """Verify the x0 reweighting has zero drift and unit covariance.

    The reweighted step law is p(s) = w(s) x0^s / chi(x0). Its mean vanishes
    because x0 is the critical point of chi; its covariance Sigma satisfies
    A Sigma A^T = I for A = Delta^{-1/2} D^{-1}, with Delta the correlation
    matrix (equal to the normalized chi Hessian at zero drift) and
    D = diag(sqrt(Sigma_ii)).
    """
    cp = critical_point(model)
    x0 = np.asarray(cp.x0, dtype=float)
    steps = np.array(model.steps(), dtype=float)
    weights = np.array(
        [float(model.weights[tuple(int(c) for c in s)]) for s in steps]
    )
    mass = weights * np.prod(x0 ** steps, axis=1)
    p = mass / mass.sum()
    mean = p @ steps
    sigma = (steps - mean).T @ ((steps - mean) * p[:, None])
    d_inv = np.diag(1.0 / np.sqrt(np.diag(sigma)))
    a = covariance(model, cp).inv_sqrt() @ d_inv
    dev = a @ sigma @ a.T - np.eye(model.d)
    return ZeroDriftCheck(
        x0=cp.x0,
        drift_residual=float(np.linalg.norm(mean)),
        covariance_residual=float(np.max(np.abs(dev))),
        tol=float(tol),
    )
