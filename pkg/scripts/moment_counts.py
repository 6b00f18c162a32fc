"""Enumerate and verify the moment-curve equipartitions for odd j, then run the degree test."""

import argparse
import math
import time

from equipart.moment import decide_ramos_two, enumerate_standard


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--jmax", type=int, default=7, help="largest odd j to enumerate (<= 9)")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--decide-up-to", type=int, default=33)
    a = ap.parse_args()

    print(f"{'j':>3} {'d':>3} {'certs':>6} {'C(j,(j-1)/2)':>13} {'seconds':>8}")
    for j in range(1, a.jmax + 1, 2):
        t0 = time.perf_counter()
        certs = enumerate_standard(j, workers=a.workers)
        dt = time.perf_counter() - t0
        print(f"{j:>3} {certs[0].d:>3} {len(certs):>6} {math.comb(j, (j - 1) // 2):>13} {dt:>8.2f}")

    print()
    for j in range(1, a.decide_up_to + 1, 2):
        dec = decide_ramos_two(j)
        verdict = f"Delta({j},2) = {dec.certified}" if dec.certified else "inconclusive"
        print(f"j={j:>3} d={dec.d:>3} |deg|={dec.degree:<12} {verdict}: {'; '.join(dec.reasons)}")


if __name__ == "__main__":
    main()
