"""Tensor-rank bounds for det_n next to the decomposition lengths the constructions produce."""

import argparse
import json
from math import factorial

from torusrank.detdecomp import rank_bound_report
from torusrank.periodic import per_unit_face_counts, staircase


def lengths(n: int) -> dict:
    per_unit = per_unit_face_counts(staircase(n))[-1]
    out = {"staircase_lex": per_unit, "crystal_torus": (n + 1) * per_unit}
    if n >= 2:
        out["tri_torus"] = (2 ** (n + 1) - 1) * per_unit
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=7)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows = []
    for n in range(1, args.max_n + 1):
        r = rank_bound_report(n)
        rows.append({**r.to_json(), "lengths": lengths(n)})
    if args.json:
        print(json.dumps(rows, indent=1))
        return
    print(f"{'n':>2} {'lower':>12} {'ceil':>6} {'n!':>6} {'crystal':>8} {'tri':>8}")
    for row in rows:
        ln = row["lengths"]
        print(f"{row['n']:>2} {row['lower']:>12} {row['ceiling']:>6} {factorial(row['n']):>6} "
              f"{ln['crystal_torus']:>8} {ln.get('tri_torus', '-'):>8}")


if __name__ == "__main__":
    main()
