"""How the off-identity terms of the eps-subdivided staircase shrink as eps -> 0."""

import argparse
from fractions import Fraction

from torusrank.detdecomp import eps_term_bound
from torusrank.periodic import staircase


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--max-k", type=int, default=10, help="sweep eps = 2^-k for k = 2..max_k")
    args = ap.parse_args()
    for n in args.n:
        print(f"n = {n}")
        print(f"{'eps':>8} {'bound':>12} {'off-id max':>14} {'id dev':>14} {'ratio':>8} {'round':>6}")
        prev = None
        for k in range(2, args.max_k + 1):
            r = eps_term_bound(staircase(n), Fraction(1, 2**k))
            ratio = f"{float(prev / r.max_non_identity):.3f}" if prev else "-"
            prev = r.max_non_identity
            print(f"{'2^-' + str(k):>8} {float(r.bound):>12.6g} {float(r.max_non_identity):>14.6g} "
                  f"{float(r.max_identity_deviation):>14.6g} {ratio:>8} {str(r.rounding_ok):>6}")


if __name__ == "__main__":
    main()
