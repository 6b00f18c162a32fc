"""Command-line interface.

Exit codes: 0 success / Found, 1 NotFound or verification failure, 2 usage error.
Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import bounds as B
from .f2 import PowerIdealCap, certify_upper_bound
from .model import load_masses
from .moment import (
    CertificateError,
    EquipartitionCertificate,
    StandardConfiguration,
    decide_ramos_two,
    enumerate_standard,
    verify_certificate,
)
from .solver import SolverConfig, gaussian_clouds, solve

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEMOS = {
    # name: (number of clouds, dimension, points per cloud)
    "hadwiger": (2, 3, 1000),
    "ham-sandwich-2": (2, 2, 500),
    "ham-sandwich-3": (3, 3, 500),
}


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _plain(obj: dict) -> str:
    return "".join(f"{k}: {v}\n" for k, v in obj.items())


def _emit(obj: dict, fmt: str, out):
    out.write(_dump(obj) if fmt == "json" else _plain(obj))


def _add_format(p: argparse.ArgumentParser, choices=("json", "plain"), default="json"):
    p.add_argument("--format", choices=choices, default=default, help=f"output format (default {default})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equipart", description="Hyperplane equipartitions of masses: bounds, certificates, search."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="bounds record for one (j, k)")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--index-certificates", action="store_true", help="merge F2 index certificates")
    _add_format(p)

    p = sub.add_parser("table", help="propagated bounds table")
    p.add_argument("--jmax", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--conjecture", action="store_true", help="add a labeled conjectured-value column")
    p.add_argument("--index-certificates", action="store_true", help="merge F2 index certificates")
    _add_format(p, ("markdown", "csv", "json"), "markdown")

    p = sub.add_parser("certify", help="F2 index certificate for Delta(j, k) <= d")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--cap", type=int, help="prune monomials with an exponent above this degree")
    _add_format(p)

    p = sub.add_parser("enumerate", help="moment-curve equipartition certificates")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--out", type=Path, help="write certificates to this file instead of stdout")
    p.add_argument("--workers", type=int, default=1)
    _add_format(p, ("json",))

    p = sub.add_parser("verify", help="re-verify certificates exactly")
    p.add_argument("--cert", type=Path, required=True)
    _add_format(p)

    p = sub.add_parser("solve", help="numerical eps-equipartition search")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--masses", type=Path, help="mass JSON file")
    src.add_argument("--demo", choices=sorted(DEMOS), help="generated Gaussian clouds")
    p.add_argument("--demo-seed", type=int, default=0)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float, default=0.02)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--max-iters", type=int, default=4000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--time-budget", type=float)
    _add_format(p)

    p = sub.add_parser("decide", help="degree test for Delta(j, 2) = (3j+1)/2, j odd")
    p.add_argument("--j", type=int, required=True)
    _add_format(p)
    return parser


def _cmd_bounds(a, out) -> int:
    if a.j < 1 or a.k < 1:
        raise UsageError("--j and --k must be positive")
    rec = B.bounds_record(a.j, a.k, a.index_certificates)
    obj = rec.to_json()
    obj["formula_upper"] = B.mani_upper(a.j, a.k)
    _emit(obj, a.format, out)
    return EXIT_OK


def _cmd_table(a, out) -> int:
    if a.jmax < 0 or a.kmax < 0:
        raise UsageError("--jmax and --kmax must be non-negative")
    table = B.build_table(a.jmax, a.kmax, a.index_certificates)
    out.write(B.render_table(table, a.format, a.conjecture))
    return EXIT_OK


def _cmd_certify(a, out) -> int:
    cap = PowerIdealCap(a.cap) if a.cap is not None else None
    try:
        cert = certify_upper_bound(a.j, a.k, cap)
    except ValueError as e:
        raise UsageError(str(e)) from e
    obj = cert.to_json()
    mani = B.mani_upper(a.j, a.k)
    obj["mani_upper"] = mani
    obj["improves_mani"] = cert.d_star < mani
    if cert.d_star < mani:
        print(f"note: d_star {cert.d_star} is below the closed-form bound {mani}", file=sys.stderr)
    _emit(obj, a.format, out)
    return EXIT_OK


def _cmd_enumerate(a, out) -> int:
    try:
        certs = enumerate_standard(a.j, workers=a.workers)
    except ValueError as e:
        raise UsageError(str(e)) from e
    payload = [c.to_json() for c in certs]
    if a.out is not None:
        a.out.write_text(_dump(payload))
        out.write(_dump({"j": a.j, "count": len(certs), "out": str(a.out)}))
    else:
        out.write(_dump(payload))
    return EXIT_OK


def _cmd_verify(a, out) -> int:
    data = json.loads(a.cert.read_text())
    items = data if isinstance(data, list) else [data]
    results, ok = [], True
    for obj in items:
        cert = EquipartitionCertificate.from_json(obj)
        entry = {"j": cert.j, "subset": list(cert.subset)}
        try:
            verify_certificate(cert, StandardConfiguration.standard(cert.j))
            entry["valid"] = True
        except CertificateError as e:
            ok = False
            entry["valid"] = False
            entry["error"] = str(e)
            print(f"verification failed: {e}", file=sys.stderr)
        results.append(entry)
    summary = {"checked": len(results), "valid": sum(r["valid"] for r in results), "results": results}
    if a.format == "json":
        out.write(_dump(summary))
    else:
        out.write(f"checked: {summary['checked']}\nvalid: {summary['valid']}\n")
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_solve(a, out) -> int:
    if a.masses is not None:
        _, masses = load_masses(a.masses.read_text())
    else:
        j, d, n = DEMOS[a.demo]
        masses = gaussian_clouds(j, d, n, np.random.default_rng(a.demo_seed))
    cfg = SolverConfig(
        eps=a.eps,
        restarts=a.restarts,
        max_iters=a.max_iters,
        seed=a.seed,
        time_budget=a.time_budget,
        workers=a.workers,
    )
    try:
        res = solve(masses, a.k, cfg)
    except (ValueError, TypeError) as e:
        raise UsageError(str(e)) from e
    obj = res.to_json()
    if a.format == "json":
        out.write(_dump(obj))
    else:
        out.write(_plain({k: v for k, v in obj.items() if k != "arrangement"}))
    if not res.found:
        print("no eps-equipartition found within budget", file=sys.stderr)
    return EXIT_OK if res.found else EXIT_FAIL


def _cmd_decide(a, out) -> int:
    try:
        dec = decide_ramos_two(a.j)
    except ValueError as e:
        raise UsageError(str(e)) from e
    _emit(dec.to_json(), a.format, out)
    return EXIT_OK


COMMANDS = {
    "bounds": _cmd_bounds,
    "table": _cmd_table,
    "certify": _cmd_certify,
    "enumerate": _cmd_enumerate,
    "verify": _cmd_verify,
    "solve": _cmd_solve,
    "decide": _cmd_decide,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        print(f"equipart {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError, KeyError) as e:
        print(f"equipart {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
