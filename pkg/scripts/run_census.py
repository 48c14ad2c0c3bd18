#!/usr/bin/env python3
"""Run the 2D unit-weight census and print the classification table.

The reduced pipeline drops step sets that do not interact with both
orthant constraints, folds the survivors into diagonal-relabeling classes,
and decides finiteness of each class by exact orbit search. Expected
counts are enforced inside the library; this driver reports them.

    python3 scripts/run_census.py
    python3 scripts/run_census.py --mode raw --list finite
    python3 scripts/run_census.py --jobs 4 --json census.json
"""

import argparse
import json
import sys
import time

from walkgroups.classify import CensusMismatch, enumerate_2d_unweighted

COMPASS = {
    (1, 0): "E", (1, 1): "NE", (0, 1): "N", (-1, 1): "NW",
    (-1, 0): "W", (-1, -1): "SW", (0, -1): "S", (1, -1): "SE",
}


def support_label(steps):
    return ",".join(COMPASS[tuple(s)] for s in steps)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mode", choices=("reduced", "raw"), default="reduced")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes")
    ap.add_argument("--list", choices=("finite", "all"), default=None,
                    help="also print the per-class table")
    ap.add_argument("--json", metavar="PATH", default=None,
                    help="write the full report as JSON")
    args = ap.parse_args(argv)

    started = time.perf_counter()
    try:
        report = enumerate_2d_unweighted(mode=args.mode, jobs=args.jobs)
    except CensusMismatch as exc:
        print(f"census mismatch: {exc}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - started

    print(f"mode {report.mode}: {report.total} step sets, "
          f"{report.kept} kept, {len(report.classes)} classes")
    print(f"  singular {report.singular}, finite {report.finite}, "
          f"order histogram {dict(sorted(report.order_histogram.items()))}")
    if report.filter_counts:
        print("  dropped by filter:")
        for name, n in report.filter_counts.items():
            print(f"    {name:22s} {n}")
    print(f"  elapsed {elapsed:.2f} s")

    if args.list:
        print()
        for entry in report.classes:
            if args.list == "finite" and entry.verdict != "finite":
                continue
            order = "-" if entry.order is None else str(entry.order)
            check = ""
            if entry.verdict == "finite":
                check = " ok" if entry.corroborated else " UNCORROBORATED"
            print(f"  {entry.mask:3d}  {support_label(entry.steps):30s} "
                  f"{entry.verdict:13s} {order:>3s}{check}")

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report.to_dict(), fh, indent=2)
        print(f"wrote {args.json}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
