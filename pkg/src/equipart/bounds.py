"""Bounds on Delta(j, k): closed forms, seeded exact values, reductions.

Upper bounds are propagated to a fixed point with
    Delta(j, k) <= Delta(2j, k - 1)        (ReductionHalve)
    Delta(j, k) <= Delta(j + 1, k) - 1     (ReductionMatschke)
Lower bounds come only from the moment-curve counting bound.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, replace
from typing import Optional

RAMOS_LOWER = "RamosLower"
MANI_UPPER = "ManiUpper"
INDEX_CERTIFICATE = "IndexCertificate"
REDUCTION_HALVE = "ReductionHalve"
REDUCTION_MATSCHKE = "ReductionMatschke"


def seeded_tag(name: str) -> str:
    return f"SeededExact({name})"


class BoundsInconsistency(RuntimeError):
    pass


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def ramos_lower(j: int, k: int) -> int:
    if j < 1 or k < 1:
        raise ValueError("j, k >= 1")
    return max(k, _ceil_div((2**k - 1) * j, k))


def mani_upper(j: int, k: int) -> int:
    if j < 1 or k < 1:
        raise ValueError("j, k >= 1")
    t = j.bit_length() - 1
    r = j - 2**t
    return 2 ** (t + k - 1) + r


def ramos_conjecture(j: int, k: int) -> int:
    return _ceil_div((2**k - 1) * j, k)


def seeded_exact_values(jmax: int = 64, kmax: int = 6) -> list[tuple[int, int, int, str]]:
    """Proven exact values with 1 <= j <= jmax, 1 <= k <= kmax."""
    out = []
    if kmax >= 2:
        if jmax >= 2:
            out.append((2, 2, 3, "Hadwiger"))
        t = 0
        while 2 ** (t + 1) - 1 <= jmax:
            out.append((2 ** (t + 1) - 1, 2, 3 * 2**t - 1, "bounds coincide"))
            t += 1
        t = 2
        while 2**t + 1 <= jmax:
            out.append((2**t + 1, 2, 3 * 2 ** (t - 1) + 2, f"Thm 5.1 t={t}"))
            t += 1
    return sorted(out)


@dataclass(frozen=True)
class DisputedClaim:
    j: int
    k: int
    claimed_upper: int
    reference: str


def disputed_claims(jmax: int = 64, kmax: int = 6) -> list[DisputedClaim]:
    """Upper bounds claimed in the literature without a valid proof (never merged)."""
    out = []
    if kmax >= 2 and jmax >= 5:
        out.append(DisputedClaim(5, 2, 8, "Mani-Levitska et al. 2006, Thm. 4"))
    t = 1
    while 2**t <= jmax:
        j = 2**t
        if kmax >= 2:
            out.append(DisputedClaim(j, 2, 3 * 2 ** (t - 1), "Ramos 1996 Thm. 6.3; Mani-Levitska et al. Prop. 25"))
            if j + 1 <= jmax:
                out.append(DisputedClaim(j + 1, 2, 3 * 2 ** (t - 1) + 2, "Zivaljevic 2011, Thm. 2.1"))
        if kmax >= 3:
            out.append(DisputedClaim(j, 3, 5 * 2 ** (t - 1), "Ramos 1996, Thm. 6.3"))
        if kmax >= 4:
            out.append(DisputedClaim(j, 4, 9 * 2 ** (t - 1), "Ramos 1996, Thm. 6.3"))
        if kmax >= 5:
            out.append(DisputedClaim(j, 5, 15 * 2 ** (t - 1), "Ramos 1996, Thm. 6.3"))
        t += 1
    if jmax >= 1 and kmax >= 4:
        out.append(DisputedClaim(1, 4, 5, "Ramos 1996, Thm. 6.3"))
    if jmax >= 1 and kmax >= 5:
        out.append(DisputedClaim(1, 5, 9, "Ramos 1996, Thm. 6.3"))
    return sorted(out, key=lambda c: (c.k, c.j, c.claimed_upper))


@dataclass(frozen=True)
class BoundsRecord:
    j: int
    k: int
    lower: int
    upper: int
    exact: Optional[int] = None
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        if self.lower > self.upper:
            raise BoundsInconsistency(
                f"cell (j={self.j}, k={self.k}): lower {self.lower} > upper {self.upper}"
            )
        if self.exact is not None and not (self.exact == self.lower == self.upper):
            raise BoundsInconsistency(f"cell (j={self.j}, k={self.k}): exact value disagrees with bounds")

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "k": self.k,
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "provenance": list(self.provenance),
        }


@dataclass
class BoundsTable:
    jmax: int
    kmax: int
    grid: dict = field(default_factory=dict)

    def __getitem__(self, jk: tuple[int, int]) -> BoundsRecord:
        return self.grid[jk]

    def cells(self) -> list[BoundsRecord]:
        return [self.grid[key] for key in sorted(self.grid)]

    def copy(self) -> "BoundsTable":
        return BoundsTable(self.jmax, self.kmax, dict(self.grid))


def initial_table(jmax: int, kmax: int, seeds: bool = True, index_certificates: bool = False) -> BoundsTable:
    """Formula bounds plus seeds, before propagation."""
    if jmax < 0 or kmax < 0:
        raise ValueError("table size must be non-negative")
    table = BoundsTable(jmax, kmax)
    for j in range(1, jmax + 1):
        for k in range(1, kmax + 1):
            table.grid[(j, k)] = BoundsRecord(
                j, k, ramos_lower(j, k), mani_upper(j, k), None, (RAMOS_LOWER, MANI_UPPER)
            )
    if seeds:
        for j, k, value, name in seeded_exact_values(jmax, kmax):
            _improve(table, j, k, value, seeded_tag(name))
    if index_certificates:
        _merge_index_certificates(table)
    return table


def _merge_index_certificates(table: BoundsTable):
    # no equivariant map Y_{d,k} -> S(U_k^j) also gives Delta(j - m, k) <= d - m
    from .f2 import CERTIFY_MAX_K, CERTIFY_MAX_WORK, certify_upper_bound

    for (j, k) in sorted(table.grid):
        if k > CERTIFY_MAX_K or j * (2**k - 1) > CERTIFY_MAX_WORK:
            continue
        d_star = certify_upper_bound(j, k).d_star
        for m in range(j):
            _improve(table, j - m, k, d_star - m, INDEX_CERTIFICATE)


def _improve(table: BoundsTable, j: int, k: int, value: int, tag: str) -> bool:
    rec = table.grid[(j, k)]
    if value >= rec.upper:
        return False
    if value < rec.lower:
        raise BoundsInconsistency(
            f"cell (j={j}, k={k}): {tag} gives upper {value} below lower bound {rec.lower}"
        )
    prov = rec.provenance if tag in rec.provenance else rec.provenance + (tag,)
    table.grid[(j, k)] = replace(rec, upper=value, provenance=prov)
    return True


def propagate(table: BoundsTable) -> BoundsTable:
    """Apply both reductions to a fixed point and mark exact cells."""
    out = table.copy()
    changed = True
    while changed:
        changed = False
        for (j, k) in sorted(out.grid):
            if k >= 2 and (2 * j, k - 1) in out.grid:
                changed |= _improve(out, j, k, out.grid[(2 * j, k - 1)].upper, REDUCTION_HALVE)
            if (j + 1, k) in out.grid:
                changed |= _improve(out, j, k, out.grid[(j + 1, k)].upper - 1, REDUCTION_MATSCHKE)
    for key, rec in out.grid.items():
        if rec.lower > rec.upper:
            raise BoundsInconsistency(f"cell (j={key[0]}, k={key[1]}): lower > upper")
        exact = rec.lower if rec.lower == rec.upper else None
        if exact != rec.exact:
            out.grid[key] = replace(rec, exact=exact)
    return out


def build_table(jmax: int, kmax: int, index_certificates: bool = False) -> BoundsTable:
    return propagate(initial_table(jmax, kmax, index_certificates=index_certificates))


def bounds_record(j: int, k: int, index_certificates: bool = False) -> BoundsRecord:
    """Record for one cell, propagated on a grid large enough for the seeds that reach it."""
    jmax = max(2 * j * 2 ** (k - 1), j + 1, 17)
    return build_table(jmax, k, index_certificates)[(j, k)]


# ------------------------------------------------------------------ rendering


def _center(rec: BoundsRecord) -> str:
    if rec.exact is not None:
        return str(rec.exact)
    if rec.upper < mani_upper(rec.j, rec.k):
        return f"<={rec.upper}"
    return " "


def render_markdown(table: BoundsTable, conjecture: bool = False) -> str:
    """Three-number cells: lower bound, exact value or improved upper bound, formula upper bound."""
    ks = range(1, table.kmax + 1)
    header = "| j \\ k | " + " | ".join(str(k) for k in ks) + " |"
    rule = "|---|" + "---|" * table.kmax
    lines = [header, rule]
    for j in range(1, table.jmax + 1):
        cells = []
        for k in ks:
            rec = table[(j, k)]
            cell = f"{rec.lower}<= [{_center(rec)}] <={mani_upper(j, k)}"
            if conjecture:
                cell += f" (conj. {ramos_conjecture(j, k)})"
            cells.append(cell)
        lines.append(f"| {j} | " + " | ".join(cells) + " |")
    if conjecture:
        lines.append("")
        lines.append("conj. = conjectured value ceil((2^k-1)j/k); not a proven bound")
    return "\n".join(lines) + "\n"


def render_csv(table: BoundsTable, conjecture: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ["j", "k", "lower", "upper", "exact", "provenance"]
    if conjecture:
        cols.append("conjectured")
    w.writerow(cols)
    for rec in table.cells():
        row = [rec.j, rec.k, rec.lower, rec.upper, "" if rec.exact is None else rec.exact,
               ";".join(rec.provenance)]
        if conjecture:
            row.append(ramos_conjecture(rec.j, rec.k))
        w.writerow(row)
    return buf.getvalue()


def render_json(table: BoundsTable, conjecture: bool = False) -> str:
    cells = []
    for rec in table.cells():
        obj = rec.to_json()
        if conjecture:
            obj["conjectured"] = ramos_conjecture(rec.j, rec.k)
        cells.append(obj)
    return json.dumps({"jmax": table.jmax, "kmax": table.kmax, "cells": cells}, indent=2) + "\n"


def render_table(table: BoundsTable, format: str = "markdown", conjecture: bool = False) -> str:
    renderers = {"markdown": render_markdown, "csv": render_csv, "json": render_json}
    if format not in renderers:
        raise ValueError(f"unknown format {format!r}")
    return renderers[format](table, conjecture)
