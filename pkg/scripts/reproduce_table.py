"""Print the propagated bounds table (markdown by default).

    python3 scripts/reproduce_table.py --jmax 8 --kmax 5 [--index-certificates] [--format csv]
"""

import argparse

from equipart.bounds import build_table, render_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--jmax", type=int, default=8)
    ap.add_argument("--kmax", type=int, default=5)
    ap.add_argument("--format", choices=["markdown", "csv", "json"], default="markdown")
    ap.add_argument("--conjecture", action="store_true")
    ap.add_argument("--index-certificates", action="store_true")
    a = ap.parse_args()
    table = build_table(a.jmax, a.kmax, a.index_certificates)
    print(render_table(table, a.format, a.conjecture), end="")


if __name__ == "__main__":
    main()
