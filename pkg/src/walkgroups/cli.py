"""Command-line surface: analysis, classification, counting, verification.

One model per JSON file; a directory input switches to batch mode and emits
one JSON line per model in filename order. All verdicts are deterministic
given the flags: orbit searches are seeded per model unless --seed overrides.
Floats serialize with 17 significant digits and rationals as "p/q" strings,
so reports are byte-identical across runs and job counts.

Exit codes: 0 success, 1 input error, 2 hypothesis or verification failure,
3 inconclusive (bound exceeded) under --strict.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .catalog import FAMILIES, order10_canonical
from .classify import (
    CensusMismatch,
    classify3d_check,
    enumerate_2d_unweighted,
    search3d,
    verify_A3_B3_families,
    verify_family_4a,
    verify_order8_family,
    verify_order10_models,
)
from .elliptic import (
    EllipticError,
    estimate_r0,
    kernel_curve,
    order10_residual,
    periods,
    rationality_probe,
    verify_theta_identities,
)
from .geometry import GeometryError, covariance, critical_point, reflection_group
from .groups import GroupError, group_order, pair_order
from .models import ModelError, check_H1, model_seed, parse_model
from .walkcount import series_terms

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_HYPOTHESIS = 2
EXIT_INCONCLUSIVE = 3


# ---------------------------------------------------------------------------
# serialization

def _render_json(obj):
    """Deterministic JSON: floats at 17 significant digits, Fractions as p/q."""
    parts = []

    def emit(o):
        if o is None:
            parts.append("null")
        elif isinstance(o, bool):
            parts.append("true" if o else "false")
        elif isinstance(o, int):
            parts.append(str(o))
        elif isinstance(o, float):
            parts.append(format(o, ".17g"))
        elif isinstance(o, Fraction):
            parts.append(json.dumps(f"{o.numerator}/{o.denominator}"))
        elif isinstance(o, str):
            parts.append(json.dumps(o))
        elif isinstance(o, dict):
            parts.append("{")
            for n, (k, v) in enumerate(o.items()):
                if n:
                    parts.append(", ")
                parts.append(json.dumps(str(k)))
                parts.append(": ")
                emit(v)
            parts.append("}")
        elif isinstance(o, (list, tuple)):
            parts.append("[")
            for n, v in enumerate(o):
                if n:
                    parts.append(", ")
                emit(v)
            parts.append("]")
        else:
            parts.append(json.dumps(str(o)))

    emit(obj)
    return "".join(parts)


def _fmt_rat(value):
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else (
            f"{value.numerator}/{value.denominator}")
    return str(value)


def _parse_fraction(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"bad rational {text!r}: {exc}") from None


def _parse_tuple_list(text):
    """Semicolon-separated parameter tuples: '1,1,1;0,0,1' -> two tuples."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            out.append(tuple(_parse_fraction(v) for v in chunk.split(",")))
    if not out:
        raise ModelError("empty parameter list")
    return out


def _parse_point(text):
    return tuple(int(v) for v in text.split(","))


def _load_inputs(path_text):
    """One (name, model) per input file; directories expand to their *.json."""
    path = Path(path_text)
    if path.is_dir():
        files = sorted(path.glob("*.json"))
        if not files:
            raise ModelError(f"no *.json model files in {path}")
    elif path.is_file():
        files = [path]
    else:
        raise ModelError(f"no such file or directory: {path}")
    out = []
    for f in files:
        out.append((f.name, parse_model(f.read_text())))
    return out, path.is_dir()


# ---------------------------------------------------------------------------
# analyze

_ORDER10_SUPPORTS = tuple(
    order10_canonical(f).support()
    for f in ("rightmost", "vertical", "central", "horizontal"))


def _pair_orders(model, bound, seed):
    out = {}
    for i in range(model.d):
        for j in range(i + 1, model.d):
            base = seed if seed is not None else model_seed(model) + 13 * i + 7 * j
            verdict = pair_order(model, i, j, bound=bound, seed=base)
            out[(i, j)] = verdict.order if verdict.finite else None
    return out


def _analyze_one(model, args):
    report = {"model": model.to_dict()}
    started = time.perf_counter()
    code = EXIT_OK
    h1 = check_H1(model)
    report["h1"] = h1.satisfied
    if not h1.satisfied:
        report["h1_witness"] = list(h1.witness)
        code = EXIT_HYPOTHESIS
    else:
        seed = args.seed if args.seed is not None else model_seed(model)
        verdict = group_order(model, bound=args.bound, seed=seed)
        report["group"] = {
            "finite": verdict.finite,
            "order": verdict.order,
            "bound": args.bound,
        }
        pairs = _pair_orders(model, args.bound, args.seed)
        report["pair_orders"] = {
            f"m{i + 1}{j + 1}": pairs[(i, j)] for (i, j) in sorted(pairs)
        }
        cp = critical_point(model)
        cov = covariance(model, cp)
        report["x0"] = [float(v) for v in cp.x0]
        report["delta"] = [[float(v) for v in row] for row in cov.delta]
        known = {k: v for k, v in pairs.items() if v is not None}
        refl = reflection_group(cov, orders=known if known else None, tol=args.tol)
        report["coxeter_label"] = refl.label
        report["coxeter_order"] = refl.group_size
        if model.d == 2:
            try:
                probe = rationality_probe(model, tol=max(args.tol, 1e-9))
                report["elliptic"] = {
                    "r_values": [float(r) for r in probe.r_values],
                    "rational": probe.rational,
                    "predicted_group_order": probe.predicted_group_order(),
                }
            except EllipticError as exc:
                report["elliptic"] = {"error": str(exc)}
        elif model.d == 3:
            from .geometry import weyl_check

            wv = weyl_check(model, pairs, tol=args.tol)
            report["weyl"] = wv.weyl
            report["triplet"] = list(wv.triplet)
            if wv.reasons:
                report["weyl_reasons"] = list(wv.reasons)
        if not verdict.finite and args.strict:
            code = EXIT_INCONCLUSIVE
    report["time_seconds"] = time.perf_counter() - started
    return report, code


def _print_analysis(name, report):
    model = report["model"]
    print(f"{name}: {len(model['steps'])} steps in {model['d']}D")
    if not report["h1"]:
        print(f"  H1 violated: witness {report['h1_witness']}")
        return
    group = report["group"]
    if group["finite"]:
        print(f"  group: finite, order {group['order']}")
    else:
        print(f"  group: exceeds bound {group['bound']}")
    print("  pair orders: " + ", ".join(
        f"{k} = {v if v is not None else '>' + str(group['bound'])}"
        for k, v in report["pair_orders"].items()))
    print("  x0: (" + ", ".join(format(v, ".12g") for v in report["x0"]) + ")")
    if report.get("coxeter_label"):
        print(f"  reflection group: {report['coxeter_label']}"
              f" (order {report['coxeter_order']})")
    ell = report.get("elliptic")
    if ell and "rational" in ell:
        if ell["rational"] is not None:
            print(f"  elliptic: r = {_fmt_rat(ell['rational'])} at all sampled t"
                  f" (predicted order {ell['predicted_group_order']})")
        else:
            print("  elliptic: r(t) is not constant rational (infinite group)")
    elif ell:
        print(f"  elliptic: {ell['error']}")
    if "weyl" in report:
        print(f"  weyl: {report['weyl']}, triplet {tuple(report['triplet'])}")


def cmd_analyze(args):
    inputs, batch = _load_inputs(args.model)
    worst = EXIT_OK
    for name, model in inputs:
        report, code = _analyze_one(model, args)
        worst = max(worst, code)
        if args.json or batch:
            print(_render_json({"file": name, **report}))
        else:
            _print_analysis(name, report)
    return worst


# ---------------------------------------------------------------------------
# classify2d / classify3d

def cmd_classify2d(args):
    try:
        report = enumerate_2d_unweighted(mode=args.mode, jobs=args.jobs)
    except CensusMismatch as exc:
        print(f"census mismatch: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    if args.json:
        print(_render_json(report.to_dict()))
        return EXIT_OK
    print(f"{len(report.classes)} classes, {report.finite} finite")
    print(f"  mode: {report.mode}; kept {report.kept} of {report.total} subsets;"
          f" {report.singular} singular")
    hist = ", ".join(f"order {k}: {v}" for k, v in sorted(report.order_histogram.items()))
    print(f"  finite orders: {hist}")
    if args.mode == "reduced":
        for name, count in report.filter_counts.items():
            print(f"  filter {name}: dropped {count}")
    return EXIT_OK


def cmd_classify3d(args):
    inputs, batch = _load_inputs(args.model)
    worst = EXIT_OK
    for name, model in inputs:
        try:
            report = classify3d_check(model, bound=args.bound, tol=args.tol)
        except ModelError as exc:
            print(f"{name}: {exc}", file=sys.stderr)
            worst = max(worst, EXIT_HYPOTHESIS)
            continue
        if args.json or batch:
            print(_render_json({"file": name, **report.to_dict()}))
        else:
            print(f"{name}: weyl {report.weyl}, triplet {report.triplet},"
                  f" list entry {report.list_entry}")
            for s in report.slices:
                print(f"  slice axis {s.axis} at {s.value}: order {s.order},"
                      f" matches 2m: {s.matches_triplet}")
            for reason in report.reasons:
                print(f"  note: {reason}")
        if None in report.triplet and args.strict:
            worst = max(worst, EXIT_INCONCLUSIVE)
    return worst


# ---------------------------------------------------------------------------
# elliptic

def cmd_elliptic(args):
    inputs, batch = _load_inputs(args.model)
    t_values = [
        _parse_fraction(v) for v in args.t.split(",")
    ] if args.t else [Fraction(1, 20), Fraction(1, 10), Fraction(1, 5)]
    worst = EXIT_OK
    for name, model in inputs:
        report = {"file": name, "model": model.to_dict()}
        try:
            invariants = [periods(kernel_curve(model, t)) for t in t_values]
            report["t_table"] = [inv.to_dict() for inv in invariants]
            probe_t = tuple(t_values) if len(t_values) >= 3 else (
                Fraction(1, 20), Fraction(1, 10), Fraction(1, 5))
            probe = rationality_probe(model, t_samples=probe_t)
            report["rational"] = probe.rational
            report["predicted_group_order"] = probe.predicted_group_order()
            theta = verify_theta_identities(model, t_values[0])
            report["theta_residuals"] = {
                "w2": theta.w2_residual, "k2": theta.k2_residual}
            if model.support() in _ORDER10_SUPPORTS:
                report["order10_residual"] = [
                    float(order10_residual(inv.w, inv.k2)) for inv in invariants]
            if args.r0:
                est = estimate_r0(model)
                report["r0"] = {
                    "value": est.value,
                    "nearest": est.nearest,
                    "distance": est.distance,
                }
        except (EllipticError, GeometryError, ModelError) as exc:
            report["error"] = str(exc)
            worst = max(worst, EXIT_HYPOTHESIS)
        if args.json or batch:
            print(_render_json(report))
        else:
            _print_elliptic(name, report)
    return worst


def _print_elliptic(name, report):
    print(f"{name}:")
    if "error" in report:
        print(f"  error: {report['error']}")
        return
    for row in report["t_table"]:
        print(f"  t = {_fmt_rat(Fraction(row['t']))}: r = {row['r']:.12f},"
              f" k2 = {row['k2']:.12f}, q = {row['q']:.6e}")
    if report["rational"] is not None:
        print(f"  rational: r = {_fmt_rat(report['rational'])}"
              f" (predicted group order {report['predicted_group_order']})")
    else:
        print("  rational: no (r varies across t)")
    theta = report["theta_residuals"]
    print(f"  theta residuals: w2 {theta['w2']:.3e}, k2 {theta['k2']:.3e}")
    if "order10_residual" in report:
        vals = ", ".join(format(v, ".6g") for v in report["order10_residual"])
        print(f"  order-10 residual along t: {vals}")
    if "r0" in report:
        r0 = report["r0"]
        print(f"  r0 estimate: {r0['value']:.10f}"
              f" (nearest {_fmt_rat(r0['nearest'])}, distance {r0['distance']:.3e})")


# ---------------------------------------------------------------------------
# count

def cmd_count(args):
    inputs, batch = _load_inputs(args.model)
    start = _parse_point(args.from_)
    end = _parse_point(args.to)
    worst = EXIT_OK
    for name, model in inputs:
        try:
            terms = series_terms(model, start, end, args.n)
        except ModelError as exc:
            print(f"{name}: {exc}", file=sys.stderr)
            worst = max(worst, EXIT_INPUT)
            continue
        if args.json or batch:
            print(_render_json({
                "file": name,
                "from": list(start),
                "to": list(end),
                "terms": [_fmt_rat(v) for v in terms],
            }))
        else:
            print(f"{name}: [" + ", ".join(_fmt_rat(v) for v in terms) + "]")
    return worst


# ---------------------------------------------------------------------------
# verify-families

_2D_EXPLICIT_SUPPORT = {
    "4a": ((1, 0), (-1, 0), (1, -1), (-1, 1)),
    "order8-third-model": ((1, 1), (1, 0), (-1, 0), (-1, -1)),
}
_2D_VERIFIER = {
    "4a": verify_family_4a,
    "order8-third-model": verify_order8_family,
}


def _verify_2d_instance(family_id, model, expected_order, bound):
    if family_id == "order10-triple":
        ok = verify_order10_models(model)
    else:
        ok = _2D_VERIFIER[family_id](model)
    if ok:
        verdict = group_order(model, bound=bound, seed=model_seed(model))
        ok = verdict.finite and verdict.order == expected_order
    return ok


def cmd_verify_families(args):
    if args.family not in FAMILIES:
        print(f"unknown family {args.family!r}; known:"
              f" {', '.join(sorted(FAMILIES))}", file=sys.stderr)
        return EXIT_INPUT
    spec = FAMILIES[args.family]
    is_3d = spec.expected_triplet is not None or args.family == "Z2xD2k"
    rows = []
    try:
        if args.weights is not None:
            if args.family not in _2D_EXPLICIT_SUPPORT:
                raise ModelError(
                    f"--weights applies to {sorted(_2D_EXPLICIT_SUPPORT)}")
            support = _2D_EXPLICIT_SUPPORT[args.family]
            for weights in _parse_tuple_list(args.weights):
                if len(weights) != len(support):
                    raise ModelError(
                        f"{args.family} needs {len(support)} weights"
                        f" for steps {support}")
                from .models import WeightedModel

                model = WeightedModel(2, dict(zip(support, weights)))
                ok = _verify_2d_instance(
                    args.family, model, spec.expected_order, args.bound)
                rows.append((f"weights {','.join(map(_fmt_rat, weights))}", ok))
        else:
            param_tuples = (
                _parse_tuple_list(args.params) if args.params is not None
                else spec.default_parameters)
            for params in param_tuples:
                label = ",".join(map(_fmt_rat, params)) if params else "default"
                if is_3d:
                    ok = verify_A3_B3_families(spec, parameters=params,
                                               bound=args.bound)
                else:
                    model = spec.build(*params)
                    ok = _verify_2d_instance(
                        args.family, model, spec.expected_order, args.bound)
                rows.append((label, ok))
    except ModelError as exc:
        print(f"verify-families: {exc}", file=sys.stderr)
        return EXIT_INPUT

    passed = sum(1 for _, ok in rows if ok)
    if args.json:
        print(_render_json({
            "family": args.family,
            "expected_order": spec.expected_order,
            "instances": [{"parameters": label, "pass": ok} for label, ok in rows],
            "passed": passed,
            "total": len(rows),
        }))
    else:
        for label, ok in rows:
            print(f"  {args.family}({label}): {'PASS' if ok else 'FAIL'}")
        order = f" with order {spec.expected_order}" if spec.expected_order else ""
        print(f"{args.family}: {passed}/{len(rows)} pass{order}")
    return EXIT_OK if passed == len(rows) else EXIT_HYPOTHESIS


# ---------------------------------------------------------------------------
# search3d

def cmd_search3d(args):
    support = None
    if args.support:
        support = [tuple(int(v) for v in chunk.split(","))
                   for chunk in args.support.split(";") if chunk.strip()]
    try:
        hits = search3d(
            args.max_steps,
            support_mask=support,
            quotient_permutations=not args.no_quotient,
            bound=args.bound,
            tol=args.tol,
        )
    except ModelError as exc:
        print(f"search3d: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        print(_render_json([h.to_dict() for h in hits]))
    else:
        print(f"{len(hits)} weyl hit(s)")
        for h in hits:
            steps = ", ".join(str(s) for s in h.model.steps())
            print(f"  triplet {h.triplet}, entry {h.list_entry}: {steps}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _add_common(sub, bound_default=32):
    sub.add_argument("--json", action="store_true", help="machine-readable output")
    sub.add_argument("--jobs", type=int, default=1, help="parallel workers")
    sub.add_argument("--seed", type=int, default=None,
                     help="override per-model deterministic seeds")
    sub.add_argument("--bound", type=int, default=bound_default,
                     help=f"orbit search bound (default {bound_default})")
    sub.add_argument("--tol", type=float, default=1e-9,
                     help="angle/rationality tolerance (default 1e-9)")
    sub.add_argument("--strict", action="store_true",
                     help="exit 3 on bound-exceeded verdicts")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="walkgroups",
        description="Finiteness and structure of groups of orthant-confined"
                    " weighted walk models.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("analyze", help="full per-model analysis")
    p.add_argument("model", help="model JSON file or directory")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = subs.add_parser("classify2d", help="census of unweighted 2D models")
    p.add_argument("--mode", choices=("raw", "reduced"), default="reduced")
    _add_common(p)
    p.set_defaults(func=cmd_classify2d)

    p = subs.add_parser("classify3d", help="3D Weyl-property report")
    p.add_argument("model", help="model JSON file or directory")
    _add_common(p)
    p.set_defaults(func=cmd_classify3d)

    p = subs.add_parser("elliptic", help="period ratio r(t) and theta checks")
    p.add_argument("model", help="model JSON file or directory")
    p.add_argument("--t", default=None,
                   help="comma-separated rational t values (default 1/20,1/10,1/5)")
    p.add_argument("--r0", action="store_true", help="extrapolate the t->0 limit")
    _add_common(p)
    p.set_defaults(func=cmd_elliptic)

    p = subs.add_parser("count", help="exact confined walk counts")
    p.add_argument("model", help="model JSON file or directory")
    p.add_argument("--from", dest="from_", required=True,
                   help="start point, e.g. 0,0")
    p.add_argument("--to", required=True, help="end point, e.g. 0,0")
    p.add_argument("--n", type=int, required=True, help="maximum length")
    _add_common(p)
    p.set_defaults(func=cmd_count)

    p = subs.add_parser("verify-families", help="check a named finite family")
    p.add_argument("--family", required=True,
                   help="family id: " + ", ".join(sorted(FAMILIES)))
    p.add_argument("--params", default=None,
                   help="semicolon-separated parameter tuples, e.g. '0;1;7/2'")
    p.add_argument("--c", dest="params_c", default=None,
                   help="shorthand: comma-separated single parameters")
    p.add_argument("--weights", default=None,
                   help="explicit weights for the 2D product families")
    _add_common(p, bound_default=64)
    p.set_defaults(func=cmd_verify_families)

    p = subs.add_parser("search3d", help="sweep 3D models for Weyl hits")
    p.add_argument("--max-steps", type=int, required=True)
    p.add_argument("--support", default=None,
                   help="allowed steps 'i,j,k;i,j,k;...' (default: all 26)")
    p.add_argument("--no-quotient", action="store_true",
                   help="do not fold by coordinate permutations")
    _add_common(p)
    p.set_defaults(func=cmd_search3d)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "params_c", None) is not None and args.params is None:
        args.params = ";".join(args.params_c.split(","))
    try:
        return args.func(args)
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GroupError, GeometryError, EllipticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS


if __name__ == "__main__":
    sys.exit(main())
