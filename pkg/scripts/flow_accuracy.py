"""Closed-form flow against RK4, per group class.

    python3 scripts/flow_accuracy.py [--n 50] [--s 2] [--step 1e-3] [--seed 0]
"""

import argparse
import sys

import numpy as np

from lieobs.flow import FieldSpec, flow
from lieobs.groups import E, R2, R3, r3_lambda, r3_prime_lambda
from lieobs.integrate import rk4

CLASSES = [R2, R3, r3_lambda(0.5), r3_lambda(-0.3), r3_prime_lambda(0.4), E]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--s", type=float, default=2.0, help="integrate over [-s, s]")
    ap.add_argument("--step", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    s_values = np.linspace(-args.s, args.s, 9)
    worst = 0.0
    print(f"{'class':<20} {'max |closed - rk4|':>20}")
    for cls in CLASSES:
        dev = 0.0
        for _ in range(args.n):
            fld = FieldSpec(rng.uniform(-1.5, 1.5, (2, 2)), rng.uniform(-1, 1, 2))
            g = rng.uniform(-1, 1, 3)
            closed = flow(cls, fld, s_values, g)
            ref = rk4(cls, fld, g, s_values, args.step)
            dev = max(dev, float(np.abs(closed - ref).max()))
        worst = max(worst, dev)
        print(f"{cls.label:<20} {dev:>20.3e}")
    print(f"worst deviation {worst:.3e}")
    return 0 if worst < 1e-6 else 1


if __name__ == "__main__":
    sys.exit(main())
