"""Census of sublattices of Z^n by index: how many avoid the forbidden-vector families.

Also tallies the staircase edge-distance class of every sublattice, which is
what decides whether the quotient is a simplicial complex, a cell complex
only, or neither.
"""

import argparse
import json
from collections import Counter

from torusrank.lattice import enumerate_sublattices, min_index_search
from torusrank.periodic import staircase_distance_by_lattice


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("n", type=int)
    ap.add_argument("max_index", type=int)
    ap.add_argument("--families", default="012,-101")
    args = ap.parse_args()

    res = min_index_search(args.n, args.families.split(","), args.max_index)
    print(f"smallest passing index: {res.smallest}")
    if res.example is not None:
        print(f"example basis: {res.example.basis.tolist()}")
    print(f"{'index':>5} {'lattices':>9} {'d=1':>6} {'d=2':>6} {'d>=3':>6}")
    for k in range(1, args.max_index + 1):
        dist = Counter(staircase_distance_by_lattice(L) for L in enumerate_sublattices(args.n, k))
        total = sum(dist.values())
        print(f"{k:>5} {total:>9} {dist[1]:>6} {dist[2]:>6} {dist[3]:>6}")
    print(json.dumps(res.to_json()["census"]))


if __name__ == "__main__":
    main()
