"""Compare the symbolic discreteness decision for I with the sampling oracle.

    python3 scripts/oracle_agreement.py [--n 500] [--seed 0] [--span 5] [--step 0.01]
"""

import argparse
import sys
import time

from lieobs.observability import default_s_grid, indistinguishable_numeric, indistinguishable_set
from lieobs.sampling import random_instances
from lieobs.subgroups import kernel_of


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--span", type=float, default=5.0)
    ap.add_argument("--step", type=float, default=0.01)
    args = ap.parse_args()

    grid = default_s_grid(args.span, args.step)
    start = time.perf_counter()
    disagree = []
    for i, inst in enumerate(random_instances(args.n, args.seed)):
        k = kernel_of(inst.cls, inst.hom)
        sym = indistinguishable_set(inst.cls, inst.field, k).is_discrete
        num = indistinguishable_numeric(inst.cls, inst.field, k, grid, seed=args.seed).is_discrete
        if sym != num:
            disagree.append((i, inst.cls.label, k.kind.value, sym, num))
    dt = time.perf_counter() - start

    for i, label, kind, sym, num in disagree:
        print(f"#{i:<5} {label:<14} {kind:<12} symbolic discrete={sym} sampled discrete={num}")
    print(f"{args.n} instances, {len(disagree)} disagreements, {dt:.1f}s")
    return 1 if disagree else 0


if __name__ == "__main__":
    sys.exit(main())
