"""Kernel curve and period ratio r(t) for 2D models.

For a normalized 2D model and t in (0,1) the kernel K(x,y) = xy(1 - t chi)
defines a genus-1 curve. Writing K as a quadratic in y with discriminant
D(x) = beta^2 - 4 alpha gamma (degree 3 or 4), the four branch points carry
the standard elliptic data: modulus k^2 from their cross-ratio, fundamental
periods omega_1 (imaginary) and omega_2 (real) as cycle integrals of
dx/sqrt(+-D), and a third period omega_3 measuring the shift automorphism of
the curve. The ratio r(t) = omega_3/omega_2 is rational iff the group of the
walk is finite, in which case |G| = 2 * denominator(r).

All period integrals reduce to Carlson symmetric RF forms of branch-point
differences (no quadrature near the square-root singularities); branch
points at infinity are handled projectively. Precision is arbitrary via
mpmath; the WALKGROUPS_PRECISION environment variable sets the default
decimal digits (30 when unset).
"""

import os
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf, elliprf, ellipfun

from .models import ModelError, check_H1, normalize


class EllipticError(RuntimeError):
    """Degenerate curve data (branch collision, complex roots, bad t)."""


def default_dps():
    try:
        return max(15, int(os.environ.get("WALKGROUPS_PRECISION", "30")))
    except ValueError:
        return 30


def _workdps(dps):
    return mp.workdps(dps if dps is not None else default_dps())


def _to_fraction(t):
    if isinstance(t, Fraction):
        return t
    if isinstance(t, int):
        return Fraction(t)
    if isinstance(t, float):
        return Fraction(t)
    if isinstance(t, str):
        return Fraction(t)
    raise ModelError(f"cannot interpret t={t!r} as an exact rational")


def _mpf_of(fr):
    return mp.mpf(fr.numerator) / fr.denominator


def _polyval(coeffs, x):
    """Evaluate sum coeffs[k] x^k (ascending) at an mpf point."""
    acc = mp.mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + (_mpf_of(c) if isinstance(c, Fraction) else c)
    return acc


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] += a * b
    return out


def _poly_sub(p, q):
    n = max(len(p), len(q))
    return [
        (p[i] if i < len(p) else Fraction(0)) - (q[i] if i < len(q) else Fraction(0))
        for i in range(n)
    ]


def _quadratic_in(model_weights, t, main_axis):
    """Coefficients alpha, beta, gamma of K as a quadratic in the other variable.

    main_axis = 1 groups by the y-exponent: K = alpha(x) y^2 + beta(x) y + gamma(x)
    with alpha = -t sum_{j=1} w x^{1+i}, beta = x - t sum_{j=0} w x^{1+i},
    gamma = -t sum_{j=-1} w x^{1+i}. main_axis = 0 gives the x-side analogues.
    """
    other = 1 - main_axis
    alpha = [Fraction(0)] * 3
    beta = [Fraction(0)] * 3
    gamma = [Fraction(0)] * 3
    beta[1] = Fraction(1)
    for step, w in model_weights.items():
        e_main = step[main_axis]
        e_other = step[other]
        target = alpha if e_main == 1 else (gamma if e_main == -1 else beta)
        target[1 + e_other] -= t * w
    return tuple(alpha), tuple(beta), tuple(gamma)


def _discriminant(alpha, beta, gamma):
    d = _poly_sub(_poly_mul(list(beta), list(beta)),
                  _poly_mul([4 * a for a in alpha], list(gamma)))
    while len(d) > 1 and d[-1] == 0:
        d.pop()
    return tuple(d)


def _real_roots(coeffs, what):
    """All roots of an exact polynomial, demanding they are real and simple."""
    deg = len(coeffs) - 1
    if deg < 3:
        raise EllipticError(f"{what} has degree {deg}; curve is not genus 1")
    desc = [_mpf_of(c) for c in reversed(coeffs)]
    roots = mp.polyroots(desc, maxsteps=200, extraprec=2 * mp.prec)
    scale = max(mp.mpf(1), max(abs(r) for r in roots))
    tol = mp.mpf(10) ** (8 - mp.dps) * scale
    real = []
    for r in roots:
        if abs(mp.im(r)) > tol:
            raise EllipticError(f"{what} has complex branch points (not genus-1 data)")
        real.append(mp.re(r))
    real.sort()
    for a, b in zip(real, real[1:]):
        if b - a <= tol:
            raise EllipticError(f"{what} has colliding branch points near {float(a)}")
    return real, deg


@dataclass(frozen=True)
class KernelCurve:
    """Branch data of xy(1 - t chi(x,y)) = 0 at a fixed t in (0,1).

    x_branch holds the labeled branch points (x1, x2, x3, x4): ascending on
    the circle R u {oo} with D > 0 on (x2, x3); None encodes the point at
    infinity. The wrap interval (x4 -> oo -> x1) is the second positive
    interval. y_branch lists the y-side branch points of E(y) analogously
    unlabeled (plus None when E has degree 3).
    """

    t: Fraction
    alpha: tuple
    beta: tuple
    gamma: tuple
    d_coeffs: tuple
    alpha_y: tuple
    beta_y: tuple
    gamma_y: tuple
    e_coeffs: tuple
    x_branch: tuple
    y_branch: tuple
    dps: int

    def d_at(self, x):
        return _polyval(self.d_coeffs, x)


def _cyclic_points(coeffs, dps):
    """Sorted finite roots plus None for a degree-3 point at infinity."""
    roots, deg = _real_roots(coeffs, "discriminant")
    points = list(roots)
    if deg == 3:
        points.append(None)
    return points


def _interval_test_point(points, k):
    """An interior point of the cyclic interval (points[k], points[k+1])."""
    finite = [p for p in points if p is not None]
    span = max(finite) - min(finite) + 1
    lo = points[k]
    hi = points[(k + 1) % 4]
    if lo is not None and hi is not None and lo < hi:
        return (lo + hi) / 2
    if lo is None:  # (-inf, hi)
        return hi - span
    return lo + span  # (lo, +inf), also the all-finite wrap (sign is constant across oo)


def _label_branch_points(d_coeffs, dps):
    points = _cyclic_points(d_coeffs, dps)
    if len(points) != 4:
        raise EllipticError(f"need 4 branch points, got {len(points)}")
    signs = []
    for k in range(4):
        val = _polyval(d_coeffs, _interval_test_point(points, k))
        if val == 0:
            raise EllipticError("discriminant vanishes at an interval test point")
        signs.append(1 if val > 0 else -1)
    positive = [k for k in range(4) if signs[k] > 0]
    if len(positive) != 2 or (positive[1] - positive[0]) % 4 != 2:
        raise EllipticError(f"unexpected sign pattern {signs} between branch points")
    # rotation r labels (x1..x4) = points[r..r+3]; need interval (x2,x3), i.e.
    # cyclic interval r+1, positive. The two choices differ by 2 and give the
    # same k^2 and periods; prefer infinity in the x4 slot, then the x1 slot.
    options = [(p - 1) % 4 for p in positive]
    none_pos = points.index(None) if None in points else None

    def badness(r):
        if none_pos is None:
            return r  # deterministic tie-break
        slot = (none_pos - r) % 4  # labeled position of the infinite point
        return {3: 0, 0: 1, 1: 9, 2: 9}[slot]

    r = min(options, key=badness)
    labels = tuple(points[(r + i) % 4] for i in range(4))
    if labels[1] is None or labels[2] is None:
        raise EllipticError("cannot place the infinite branch point outside (x2, x3)")
    return labels


def kernel_curve(model, t, dps=None):
    """Branch points and quadratic data of the kernel at rational t in (0,1).

    The model is normalized internally (the kernel assumes chi(1,1) = 1).
    """
    if model.d != 2:
        raise ModelError("kernel_curve needs a 2-dimensional model")
    h1 = check_H1(model)
    if not h1.satisfied:
        raise EllipticError(f"steps lie in the half-space of {h1.witness}")
    t = _to_fraction(t)
    if not 0 < t < 1:
        raise EllipticError(f"t must lie in (0,1), got {t}")
    weights = normalize(model).weights
    dps = dps if dps is not None else default_dps()
    with _workdps(dps):
        alpha, beta, gamma = _quadratic_in(weights, t, main_axis=1)
        d_coeffs = _discriminant(alpha, beta, gamma)
        alpha_y, beta_y, gamma_y = _quadratic_in(weights, t, main_axis=0)
        e_coeffs = _discriminant(alpha_y, beta_y, gamma_y)
        x_branch = _label_branch_points(d_coeffs, dps)
        y_roots, e_deg = _real_roots(e_coeffs, "y-discriminant")
        y_branch = tuple(y_roots) + ((None,) if e_deg == 3 else ())
        return KernelCurve(
            t=t,
            alpha=alpha, beta=beta, gamma=gamma, d_coeffs=d_coeffs,
            alpha_y=alpha_y, beta_y=beta_y, gamma_y=gamma_y, e_coeffs=e_coeffs,
            x_branch=x_branch, y_branch=y_branch, dps=dps,
        )


def _carlson_interval(d_coeffs, branch, lo, hi, sign):
    """integral over (lo, hi) of dx/sqrt(sign * D(x)) via Carlson RF.

    (lo, hi) must be free of branch points in its interior with
    sign*D > 0 there; endpoints may be branch points or +-mp.inf (not both
    infinite). `branch` lists the four branch points with None for infinity.
    """
    finite = [b for b in branch if b is not None]
    span = max(finite) - min(finite) + 1
    factors = []
    for b in branch:
        if b is None:
            factors.append((mp.mpf(1), mp.mpf(0)))  # the root at infinity pads to degree 4
        elif hi is not mp.inf and b >= hi:
            factors.append((b, mp.mpf(-1)))   # (b - x) > 0 on the interval
        elif lo is not mp.ninf and b <= lo:
            factors.append((-b, mp.mpf(1)))   # (x - b) > 0 on the interval
        elif hi is mp.inf:
            factors.append((-b, mp.mpf(1)))
        elif lo is mp.ninf:
            factors.append((b, mp.mpf(-1)))
        else:
            raise EllipticError(f"branch point {float(b)} inside integration interval")

    def val(a, bcoef, point):
        return a + bcoef * point

    if hi is mp.inf:
        mid = lo + span
    elif lo is mp.ninf:
        mid = hi - span
    else:
        mid = (lo + hi) / 2
    prod_mid = mp.mpf(1)
    for a, bcoef in factors:
        prod_mid *= val(a, bcoef, mid)
    d_mid = sign * _polyval(d_coeffs, mid)
    cprime = d_mid / prod_mid
    if cprime <= 0 or prod_mid <= 0:
        raise EllipticError("inconsistent sign data in period integral")

    if hi is mp.inf or lo is mp.ninf:
        if hi is mp.inf:
            ys = [mp.sqrt(val(a, b, lo)) for a, b in factors]
            slopes = [b for a, b in factors]
        else:
            ys = [mp.sqrt(val(a, b, hi)) for a, b in factors]
            slopes = [-b for a, b in factors]
        rt = [mp.sqrt(s) if s > 0 else mp.mpf(0) for s in slopes]
        u12 = rt[0] * rt[1] * ys[2] * ys[3] + ys[0] * ys[1] * rt[2] * rt[3]
        u13 = rt[0] * rt[2] * ys[1] * ys[3] + ys[0] * ys[2] * rt[1] * rt[3]
        u23 = rt[1] * rt[2] * ys[0] * ys[3] + ys[1] * ys[2] * rt[0] * rt[3]
    else:
        xs = [mp.sqrt(val(a, b, hi)) for a, b in factors]
        ys = [mp.sqrt(val(a, b, lo)) for a, b in factors]
        width = hi - lo
        u12 = (xs[0] * xs[1] * ys[2] * ys[3] + ys[0] * ys[1] * xs[2] * xs[3]) / width
        u13 = (xs[0] * xs[2] * ys[1] * ys[3] + ys[0] * ys[2] * xs[1] * xs[3]) / width
        u23 = (xs[1] * xs[2] * ys[0] * ys[3] + ys[1] * ys[2] * xs[0] * xs[3]) / width
    rf = elliprf(u12 ** 2, u13 ** 2, u23 ** 2)
    return 2 * rf / mp.sqrt(cprime)


def _homog(p):
    return (mp.mpf(1), mp.mpf(0)) if p is None else (p, mp.mpf(1))


def _det2(p, q):
    return p[0] * q[1] - q[0] * p[1]


def _cross_ratios(branch):
    """(k^2, k'^2) from the labeled branch points, projectively.

    k^2 = (x3-x2)(x4-x1) / ((x3-x1)(x4-x2)) and k'^2 is the complementary
    ratio (x2-x1)(x4-x3) / ((x3-x1)(x4-x2)); homogeneous coordinates make
    the point at infinity a regular case, and the Pluecker identity gives
    k^2 + k'^2 = 1 exactly.
    """
    h = [_homog(p) for p in branch]
    d32 = _det2(h[2], h[1])
    d41 = _det2(h[3], h[0])
    d31 = _det2(h[2], h[0])
    d42 = _det2(h[3], h[1])
    d21 = _det2(h[1], h[0])
    d43 = _det2(h[3], h[2])
    denom = d31 * d42
    return d32 * d41 / denom, d21 * d43 / denom


def _double_root_in_x(curve, ystar):
    """X(y*) = -beta~(y*) / (2 alpha~(y*)); None encodes infinity."""
    if ystar is None:
        a2 = _mpf_of(curve.alpha_y[2])
        b2 = _mpf_of(curve.beta_y[2])
        if a2 == 0:
            return None
        return -b2 / (2 * a2)
    a = _polyval(curve.alpha_y, ystar)
    b = _polyval(curve.beta_y, ystar)
    scale = max([abs(_mpf_of(v)) for v in curve.alpha_y] + [mp.mpf(1)])
    if abs(a) < mp.mpf(10) ** (12 - mp.dps) * scale * max(1, abs(ystar)) ** 2:
        return None
    return -b / (2 * a)


@dataclass(frozen=True)
class EllipticInvariants:
    """Periods, modulus, nome and the ratio r = omega3/omega2 at one t."""

    t: Fraction
    k2: object
    kp2: object
    K: object
    Kprime: object
    omega1_imag: object
    omega2: object
    omega3: object
    r: object           # folded into (0, 1/2]
    r_raw: object       # omega3/omega2 before the fold
    w: object           # sn(r K, k)
    q: object           # nome exp(-pi K/K'), in (0,1), -> 0 as t -> 0
    tau_imag: object    # K/K'
    legendre_rel: object  # |omega2/|omega1| - K/K'| / (K/K'), diagnostic

    def to_dict(self):
        out = {"t": str(self.t)}
        for name in ("k2", "kp2", "K", "Kprime", "omega1_imag", "omega2",
                     "omega3", "r", "r_raw", "w", "q", "tau_imag", "legendre_rel"):
            out[name] = float(getattr(self, name))
        return out


def _wrap_pieces(branch):
    """The wrap interval from x4 to x1 as real-line pieces.

    For an ascending labeling (x4 largest, the usual positive-leading
    layout) the wrap runs through infinity; a negative-leading quartic is
    labeled with x4 < x1 and the wrap is the finite interval between them.
    """
    x1, x4 = branch[0], branch[3]
    if x4 is None:
        return [(mp.ninf, x1)]
    if x1 is None:
        return [(x4, mp.inf)]
    if x4 < x1:
        return [(x4, x1)]
    return [(x4, mp.inf), (mp.ninf, x1)]


def _omega3_from(curve, xstar):
    """2 * integral from X(y*) to the nearer wrap endpoint, or None if X(y*)
    is outside the wrap interval."""
    branch = curve.x_branch
    x1, x4 = branch[0], branch[3]
    finite = [b for b in branch if b is not None]
    margin = (max(finite) - min(finite) + 1) * mp.mpf(10) ** (10 - mp.dps)
    finite_wrap = x1 is not None and x4 is not None and x4 < x1
    if xstar is None:
        if finite_wrap or x1 is None or x4 is None:
            return None  # infinity is outside the wrap, or is itself a branch point
        return 2 * _carlson_interval(curve.d_coeffs, branch, mp.ninf, x1, +1)
    if finite_wrap:
        if x4 + margin < xstar < x1 - margin:
            return 2 * _carlson_interval(curve.d_coeffs, branch, x4, xstar, +1)
        return None
    if x4 is not None and xstar > x4 + margin:
        return 2 * _carlson_interval(curve.d_coeffs, branch, x4, xstar, +1)
    if x1 is not None and xstar < x1 - margin:
        return 2 * _carlson_interval(curve.d_coeffs, branch, xstar, x1, +1)
    return None


def periods(curve, dps=None):
    """Fundamental periods, the shift period omega3, and r = omega3/omega2.

    omega2 = 2 int_{x2}^{x3} dx/sqrt(D), omega1 = 2i int_{x1}^{x2} dx/sqrt(-D),
    K and K' from the branch-point cross-ratios. omega3 integrates from the
    double root X(y*) of K(x, y*) to the adjacent wrap endpoint, doubled;
    y* is any y-branch point whose X(y*) lies in the wrap region (exactly
    two do; they agree modulo the lattice). The ratio is folded into
    (0, 1/2], which fixes the lattice/orientation ambiguity; the group-order
    correspondence |G| = 2 * denominator(r) arbitrates the convention.
    """
    with _workdps(dps if dps is not None else curve.dps):
        branch = curve.x_branch
        k2, kp2 = _cross_ratios(branch)
        if not (0 < k2 < 1 and 0 < kp2 < 1):
            raise EllipticError(f"cross-ratio outside (0,1): k2={float(k2)}")
        bigk = elliprf(0, kp2, 1)
        bigkp = elliprf(0, k2, 1)
        x1, x2, x3 = branch[0], branch[1], branch[2]
        omega2 = 2 * _carlson_interval(
            curve.d_coeffs, branch,
            x2, x3, +1)
        omega1 = 2 * _carlson_interval(
            curve.d_coeffs, branch,
            x1 if x1 is not None else mp.ninf, x2, -1)
        legendre = abs(omega2 / omega1 - bigk / bigkp) / (bigk / bigkp)

        omega3 = None
        for ystar in curve.y_branch:
            xstar = _double_root_in_x(curve, ystar)
            omega3 = _omega3_from(curve, xstar)
            if omega3 is not None:
                break
        if omega3 is None:
            raise EllipticError("no y-branch point lands in the wrap region")
        r_raw = omega3 / omega2
        r = r_raw - mp.floor(r_raw)
        r = min(r, 1 - r)
        w = ellipfun("sn", r * bigk, k2)
        q = mp.exp(-mp.pi * bigk / bigkp)
        return EllipticInvariants(
            t=curve.t, k2=k2, kp2=kp2, K=bigk, Kprime=bigkp,
            omega1_imag=omega1, omega2=omega2, omega3=omega3,
            r=r, r_raw=r_raw, w=w, q=q, tau_imag=bigk / bigkp,
            legendre_rel=legendre,
        )


def r_of_t(model, t, dps=None):
    """The folded period ratio r(t) in (0, 1/2]."""
    return periods(kernel_curve(model, t, dps=dps), dps=dps).r


@dataclass(frozen=True)
class ProbeResult:
    rational: Fraction | None
    r_values: tuple
    spread: float
    t_samples: tuple

    @property
    def is_rational(self):
        return self.rational is not None

    def predicted_group_order(self):
        return None if self.rational is None else 2 * self.rational.denominator


def rationality_probe(model, t_samples=(Fraction(1, 20), Fraction(1, 10), Fraction(1, 5)),
                      qmax=16, tol=1e-9, dps=None):
    """Rational(p/q) iff every sample's r agrees with one reduced p/q.

    A Rational verdict predicts group order 2q; a NonConstant verdict (the
    spread field) is evidence of an infinite group.
    """
    t_samples = tuple(_to_fraction(t) for t in t_samples)
    if len(t_samples) < 3:
        raise ModelError("need at least 3 t samples")
    if any(not 0 < t <= Fraction(1, 4) for t in t_samples):
        raise ModelError("t samples must lie in (0, 1/4]")
    if qmax < 2:
        raise ModelError("qmax must be >= 2")
    rs = [r_of_t(model, t, dps=dps) for t in t_samples]
    spread = float(max(rs) - min(rs))
    cands = {Fraction(float(r)).limit_denominator(qmax) for r in rs}
    if len(cands) == 1:
        cand = cands.pop()
        if all(abs(r - _mpf_of(cand)) <= tol for r in rs):
            return ProbeResult(cand, tuple(float(r) for r in rs), spread, t_samples)
    return ProbeResult(None, tuple(float(r) for r in rs), spread, t_samples)


R0_VALUES = tuple(
    Fraction(p, q)
    for p, q in ((1, 2), (1, 3), (1, 4), (2, 3), (2, 5), (2, 7), (3, 4),
                 (3, 5), (3, 7), (3, 8), (4, 7), (5, 7), (5, 8))
)


@dataclass(frozen=True)
class R0Estimate:
    value: float
    nearest: Fraction
    distance: float
    samples: tuple  # (t, l(t)) pairs actually used


def estimate_r0(model, t_small=(1e-4, 1e-5, 1e-6, 1e-7, 1e-8), dps=None):
    """Small-t limit of l(t) = log(1 - w^2)/log(1 - k^2).

    l(t) = r + c1 x + c2 x^2 + ... in x = -1/log q up to exponentially small
    terms, so Lagrange extrapolation of the sampled l values to x = 0 is a
    Richardson-style accelerated limit. Precision is escalated with |log t|
    because 1 - k^2 underflows fixed precision as t -> 0. The default nodes
    start at t = 1e-4: larger t leaves O(q^c) correction terms visible at the
    1e-4 level on the weighted models. Reports the nearest member of the
    13-value list of admissible limits.
    """
    ts = sorted((_to_fraction(t) for t in t_small), reverse=True)
    if len(ts) < 2:
        raise ModelError("need at least 2 decreasing t values")
    xs, ls, samples = [], [], []
    for t in ts:
        t_dps = max(dps if dps is not None else default_dps(),
                    40 + int(13 * abs(mp.log10(float(t)))))
        with _workdps(t_dps):
            inv = periods(kernel_curve(model, t, dps=t_dps), dps=t_dps)
            cn = ellipfun("cn", inv.r * inv.K, inv.k2)
            l_val = 2 * mp.log(abs(cn)) / mp.log(inv.kp2)
            xs.append(-1 / mp.log(inv.q))
            ls.append(l_val)
            samples.append((float(t), float(l_val)))
    with _workdps(max(60, (dps if dps is not None else default_dps()))):
        est = mp.mpf(0)
        for i in range(len(xs)):
            term = ls[i]
            for j in range(len(xs)):
                if j != i:
                    term *= xs[j] / (xs[j] - xs[i])
            est += term
        value = float(est)
    nearest = min(R0_VALUES, key=lambda fr: abs(value - fr))
    return R0Estimate(value=value, nearest=nearest,
                      distance=abs(value - float(nearest)), samples=tuple(samples))


def theta(kind, z=None, q=None, N=None, dps=None):
    """Jacobi theta q-series theta_kind(z, q); z = None means z = 0.

    theta1 = 2 sum (-1)^n q^{(n+1/2)^2} sin((2n+1)z)
    theta2 = 2 sum q^{(n+1/2)^2} cos((2n+1)z)
    theta3 = 1 + 2 sum q^{n^2} cos(2nz)
    theta4 = 1 + 2 sum (-1)^n q^{n^2} cos(2nz)

    With N given, exactly N terms of the sum are taken; otherwise terms are
    added until the tail bound q^{N^2} drops below both 1e-16 and the
    working-precision epsilon.
    """
    if kind not in (1, 2, 3, 4):
        raise ModelError("theta kind must be 1..4")
    if q is None or not 0 < q < 1:
        raise ModelError("nome q must lie in (0,1)")
    dps = dps if dps is not None else default_dps()
    with _workdps(dps):
        qm = mp.mpf(q)
        zm = mp.mpf(0) if z is None else mp.mpf(z)
        eps = min(mp.mpf("1e-16"), mp.eps)
        total = mp.mpf(1) if kind in (3, 4) else mp.mpf(0)
        n = 0
        while True:
            if kind in (1, 2):
                mag = qm ** ((n + mp.mpf(1) / 2) ** 2)
                ang = (2 * n + 1) * zm
                term = 2 * mag * (mp.sin(ang) if kind == 1 else mp.cos(ang))
                if kind == 1 and n % 2 == 1:
                    term = -term
            else:
                mag = qm ** ((n + 1) ** 2)
                ang = 2 * (n + 1) * zm
                term = 2 * mag * mp.cos(ang)
                if kind == 4 and (n + 1) % 2 == 1:
                    term = -term
            total += term
            n += 1
            if N is not None:
                if n >= N:
                    break
            elif mag < eps and n >= 3:
                break
            if n > 10000:
                break
        return total


def _theta1_hyp(y, q):
    """theta1(i y, q) / i: the real series 2 sum (-1)^n q^{(n+1/2)^2} sinh((2n+1)y)."""
    total = mp.mpf(0)
    n = 0
    while True:
        term = 2 * q ** ((n + mp.mpf(1) / 2) ** 2) * mp.sinh((2 * n + 1) * y)
        if n % 2 == 1:
            term = -term
        total += term
        if abs(term) < mp.eps * max(1, abs(total)) and n >= 3:
            break
        n += 1
        if n > 10000:
            break
    return total


def _theta2_hyp(y, q):
    """theta2(i y, q): the real series 2 sum q^{(n+1/2)^2} cosh((2n+1)y)."""
    total = mp.mpf(0)
    n = 0
    while True:
        term = 2 * q ** ((n + mp.mpf(1) / 2) ** 2) * mp.cosh((2 * n + 1) * y)
        total += term
        if abs(term) < mp.eps * max(1, abs(total)) and n >= 3:
            break
        n += 1
        if n > 10000:
            break
    return total


@dataclass(frozen=True)
class ThetaResiduals:
    w2_residual: float
    k2_residual: float


def verify_theta_identities(model, t, tol=1e-8, dps=None):
    """Residuals of the theta expressions for w^2 and k^2.

    With the nome q = exp(-pi K/K') the modulus satisfies
    k^2 = theta4(q)^4 / theta3(q)^4, and w = sn(rK, k) satisfies
    w^2 = -theta3^2 theta1(z,q)^2 / (theta4^2 theta2(z,q)^2) at the purely
    imaginary z with e^{2iz} = q^r, evaluated through the hyperbolic series.
    Both residuals are small exactly when the data is consistent; the caller
    compares against tol (the return carries the raw values).
    """
    dps = dps if dps is not None else default_dps()
    with _workdps(dps):
        inv = periods(kernel_curve(model, t, dps=dps), dps=dps)
        q = inv.q
        t3 = theta(3, None, q)
        t4 = theta(4, None, q)
        k2_res = abs(inv.k2 - t4 ** 4 / t3 ** 4)
        y = -(inv.r / 2) * mp.log(q)
        s1 = _theta1_hyp(y, q)
        c2 = _theta2_hyp(y, q)
        w2_theta = (t3 ** 2 * s1 ** 2) / (t4 ** 2 * c2 ** 2)
        w2_res = abs(inv.w ** 2 - w2_theta)
        return ThetaResiduals(w2_residual=float(w2_res), k2_residual=float(k2_res))


def order10_residual(w, k2):
    """Rational certificate for period ratio 2/5.

    Evaluated on the invariants w = sn(r K, k) and k^2 of a walk model, the
    returned value tends to 0 as t -> 0 exactly when r = 2/5 (dihedral group
    of order 10); for other rational r it diverges like a power of 1/t:

        (385 w^6 - 1415 w^4 + 1835 w^2 - 869) / (w^2 - 1)^3
          + 32 (k^2 - 1)(8 w^2 - 13) / (w^2 - 1)^4
          - 256 (k^2 - 1)^2 / (w^2 - 1)^8

    With q the nome and e := k^2 - 1 = O(q), v := w^2 - 1 = O(q^r), the three
    terms contribute +v^-3 and -256 e^2 v^-8 = -v^-3 (1 + O(q^(1/5))) whose
    leading parts cancel only when 2 - 8r = -3r, i.e. r = 2/5; the middle term
    then absorbs the subleading q^(-3r/2) correction. Needs roughly
    60 + 40*|log10 t| working digits: the terms individually grow like t^-3
    while their sum decays like sqrt(t).
    """
    def _coerce(v):
        if hasattr(v, "_mpf_"):
            return v
        if isinstance(v, Fraction):
            return _mpf_of(v)
        return mp.mpf(v)

    w = _coerce(w)
    k2 = _coerce(k2)
    u = w * w - 1
    if u == 0:
        raise ModelError("order10_residual has a pole at w^2 = 1")
    w2 = w * w
    term1 = (385 * w2 ** 3 - 1415 * w2 ** 2 + 1835 * w2 - 869) / u ** 3
    term2 = 32 * (k2 - 1) * (8 * w2 - 13) / u ** 4
    term3 = -256 * (k2 - 1) ** 2 / u ** 8
    return term1 + term2 + term3
