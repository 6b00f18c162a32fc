"""Compare F2 index certificates d_star(j, k) with the closed-form upper bound."""

import argparse

from equipart.bounds import mani_upper
from equipart.f2 import CERTIFY_MAX_WORK, certify_upper_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--jmax", type=int, default=16)
    ap.add_argument("--kmax", type=int, default=3)
    a = ap.parse_args()
    improvements = 0
    for k in range(1, a.kmax + 1):
        for j in range(1, a.jmax + 1):
            if j * (2**k - 1) > CERTIFY_MAX_WORK:
                break
            c = certify_upper_bound(j, k)
            m = mani_upper(j, k)
            flag = "  <-- below closed form" if c.d_star < m else ""
            improvements += c.d_star < m
            print(f"k={k} j={j:>3} d_star={c.d_star:>4} closed_form={m:>4} witness={list(c.witness)}{flag}")
    print(f"strict improvements: {improvements}")


if __name__ == "__main__":
    main()
