"""Classify every golden case and print a verdict table (or write it as CSV).

    python3 scripts/golden_table.py [--csv out.csv] [--mismatches-only]
"""

import argparse
import csv
import sys
from collections import Counter

from lieobs.golden import golden_cases
from lieobs.observability import classify_pair
from lieobs.subgroups import kernel_of


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--csv", help="write the table here")
    ap.add_argument("--mismatches-only", action="store_true")
    args = ap.parse_args()

    rows, tally = [], Counter()
    for case in golden_cases():
        v = classify_pair(case.cls, case.field, case.hom)
        ok = v.status.value == case.expected
        tally[(case.cls.label, ok)] += 1
        if ok and args.mismatches_only:
            continue
        rows.append({"case": case.name, "group": case.cls.label,
                     "kernel": kernel_of(case.cls, case.hom).kind.value,
                     "expected": case.expected, "got": v.status.value,
                     "provenance": v.provenance.value, "match": ok})

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["case", "group", "kernel", "expected", "got",
                                               "provenance", "match"], lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    else:
        for r in rows:
            flag = "" if r["match"] else "  <-- MISMATCH"
            print(f"{r['case']:<48} {r['kernel']:<12} {r['got']:<22}{flag}")

    print("\nper group (match / total):")
    for label in sorted({g for g, _ in tally}):
        good, bad = tally[(label, True)], tally[(label, False)]
        print(f"  {label:<20} {good}/{good + bad}")
    return 1 if any(not ok for _, ok in tally) else 0


if __name__ == "__main__":
    sys.exit(main())
