"""Survey how tightly the quadratic-over-linear envelope hugs the log-MGF.

Sweeps random diagonal forms, evaluates max grid slack for each (negative
means the inequality holds with margin), and prints the distribution.  A
positive max anywhere would falsify the envelope.
"""

import argparse

import numpy as np

import quadconc as qc


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--forms", type=int, default=500)
    ap.add_argument("--grid", type=int, default=512)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--p-max", type=int, default=20)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    slacks = []
    violations = 0
    for _ in range(args.forms):
        p = int(rng.integers(1, args.p_max + 1))
        form = qc.DiagonalForm(rng.uniform(-5, 5, p), rng.uniform(-5, 5, p))
        check = qc.envelope_grid_check(form, args.grid)
        slacks.append(check.max_slack)
        violations += check.violations
    slacks = np.array(slacks)

    print("forms=%d grid=%d seed=%d" % (args.forms, args.grid, args.seed))
    print("violations: %d" % violations)
    print("max slack (closest approach to equality): %.6g" % slacks.max())
    for q in (50, 90, 99):
        print("  p%d: %.6g" % (q, np.percentile(slacks, q)))
    print("most conservative form (most negative slack): %.6g" % slacks.min())
    if violations:
        raise SystemExit("envelope violated; this should never happen")


if __name__ == "__main__":
    main()
