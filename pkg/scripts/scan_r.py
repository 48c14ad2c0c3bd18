#!/usr/bin/env python3
"""Scan the period ratio r(t) across t and compare with the orbit order.

For each model the script evaluates r(t) = omega3/omega2 on a grid of
t values, reports whether the values agree with a single rational p/q,
extrapolates r0 = lim r(t) as t -> 0, and checks the finite-order
prediction |G| = 2q against the exact orbit search.

    python3 scripts/scan_r.py
    python3 scripts/scan_r.py --models kreweras,order10 --points 7
    python3 scripts/scan_r.py --model-file my_model.json
"""

import argparse
import sys
from fractions import Fraction

from walkgroups.catalog import MODELS
from walkgroups.elliptic import EllipticError, estimate_r0, kernel_curve, periods, rationality_probe
from walkgroups.groups import group_order
from walkgroups.models import model_seed, parse_model

DEFAULT_MODELS = ("simple", "kreweras", "order4", "order6", "order8", "order10", "gessel")


def t_grid(points):
    # geometric grid in (0, 1/4); denominators 8, 16, 32, ...
    return [Fraction(1, 8 * 2 ** k) for k in range(points)]


def scan(name, model, points, bound):
    print(f"{name}:")
    grid = t_grid(points)
    for t in grid:
        inv = periods(kernel_curve(model, t))
        print(f"  t = {str(t):8s} r = {float(inv.r):.12f}")

    probe = rationality_probe(model, t_samples=grid[:max(3, points)])
    verdict = group_order(model, bound=bound, seed=model_seed(model))
    if probe.rational is not None:
        predicted = 2 * probe.rational.denominator
        agree = "agrees" if (verdict.finite and verdict.order == predicted) else "DISAGREES"
        print(f"  constant r = {probe.rational} (spread {probe.spread:.1e}), "
              f"predicted |G| = {predicted}, orbit {verdict} -- {agree}")
    else:
        agree = "agrees" if not verdict.finite else "DISAGREES"
        print(f"  r varies with t (spread {probe.spread:.1e}), "
              f"predicted infinite, orbit {verdict} -- {agree}")

    est = estimate_r0(model)
    print(f"  r0 estimate {float(est.value):.10f}, nearest tabulated "
          f"{est.nearest} (distance {est.distance:.2e})")
    return agree == "agrees"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--models", default=",".join(DEFAULT_MODELS),
                    help="comma-separated catalog names")
    ap.add_argument("--model-file", action="append", default=[],
                    help="JSON model file (repeatable)")
    ap.add_argument("--points", type=int, default=5, help="t-grid size")
    ap.add_argument("--bound", type=int, default=32, help="orbit search cap")
    args = ap.parse_args(argv)

    pool = []
    for name in filter(None, args.models.split(",")):
        if name not in MODELS:
            print(f"unknown model {name!r}; choices: {', '.join(sorted(MODELS))}",
                  file=sys.stderr)
            return 1
        pool.append((name, MODELS[name]()))
    for path in args.model_file:
        with open(path) as fh:
            pool.append((path, parse_model(fh.read())))

    ok = True
    for name, model in pool:
        try:
            ok &= scan(name, model, args.points, args.bound)
        except EllipticError as exc:
            print(f"{name}: not scannable ({exc})")
        print()
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
