#!/usr/bin/env python3
"""Compare the two averaging-length formulas across a (delta, epsilon) grid.

The corrected length keeps the kernel's modulus outside the gap below
the error budget everywhere; the literal published formula rounds the
other way and collapses to t = 1 for wide gaps, where the kernel stops
suppressing anything.  This prints both side by side so the difference
is visible in one screenful.
"""

import argparse
import math
import sys

from eigenreflect.poly import (
    GapSpec,
    build_upsilon,
    max_modulus_outside_gap,
    select_parameters,
)

DEFAULT_DELTAS = (math.pi / 2, math.pi / 4, math.pi / 8, math.pi / 16)
DEFAULT_EPSILONS = (1e-1, 1e-2, 1e-3)


def kernel_peak(gap, use_paper):
    plan = select_parameters(gap, use_paper_t_formula=use_paper)
    peak = max_modulus_outside_gap(build_upsilon(plan.t, plan.n), gap.delta)
    return plan, peak


def parse_args(argv):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--deltas", default=",".join(repr(d) for d in DEFAULT_DELTAS),
        help="comma-separated gap half-widths",
    )
    parser.add_argument(
        "--epsilons", default=",".join(repr(e) for e in DEFAULT_EPSILONS),
        help="comma-separated error budgets",
    )
    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    deltas = [float(s) for s in args.deltas.split(",") if s.strip()]
    epsilons = [float(s) for s in args.epsilons.split(",") if s.strip()]

    header = (
        f"{'delta':>10} {'epsilon':>8} | {'t_corr':>6} {'deg':>5} {'peak':>9} "
        f"{'ok':>3} | {'t_lit':>6} {'deg':>5} {'peak':>9} {'ok':>3}"
    )
    print(header)
    print("-" * len(header))
    literal_failures = 0
    for delta in deltas:
        for epsilon in epsilons:
            gap = GapSpec(delta, epsilon=epsilon)
            corr_plan, corr_peak = kernel_peak(gap, use_paper=False)
            lit_plan, lit_peak = kernel_peak(gap, use_paper=True)
            corr_ok = corr_peak <= epsilon
            lit_ok = lit_peak <= epsilon
            literal_failures += 0 if lit_ok else 1
            print(
                f"{delta:10.6f} {epsilon:8.0e} | "
                f"{corr_plan.t:6d} {corr_plan.degree:5d} {corr_peak:9.2e} "
                f"{'yes' if corr_ok else 'NO':>3} | "
                f"{lit_plan.t:6d} {lit_plan.degree:5d} {lit_peak:9.2e} "
                f"{'yes' if lit_ok else 'NO':>3}"
            )
            if not corr_ok:
                print("unexpected: corrected formula misses its budget", file=sys.stderr)
                return 1
    print(
        f"\nliteral formula misses the budget on {literal_failures} of "
        f"{len(deltas) * len(epsilons)} grid points; corrected misses none"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
