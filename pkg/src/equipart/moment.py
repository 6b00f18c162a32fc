"""Exact equipartitions of interval masses on the moment curve gamma(t) = (t, ..., t^d).

For odd j and 2d = 3j + 1, the j masses uniform on t in [i, i + 1] admit
C(j, (j-1)/2) unoriented pairs (H1, H2) with H2 through the origin that
equipart them.  Each pair is determined by the set S of masses that H1 cuts
once (at the midpoint); H2 then cuts those masses at their quartiles, and the
roles swap on the other masses.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .f2 import kummer_carries
from .model import (
    AffineHyperplane,
    Arrangement,
    MomentIntervals,
    format_scalar,
    label_index,
    labels,
)
from .poly import RationalPoly, all_real_roots, real_roots_in_interval

QUARTER = Fraction(1, 4)
ENUMERATE_MAX_J = 9


class CertificateError(ValueError):
    """A certificate failed exact verification."""

    def __init__(self, message: str, mass: Optional[int] = None, label=None, value=None):
        super().__init__(message)
        self.mass = mass
        self.label = label
        self.value = value


def hyperplane_through(roots: Sequence, d: Optional[int] = None) -> AffineHyperplane:
    """Hyperplane meeting the moment curve exactly at gamma(t) for t in ``roots``.

    Coefficients of prod (t - t_i) = t^d + c_{d-1} t^{d-1} + ... + c_0 give
    normal (c_1, ..., c_{d-1}, 1) and offset -c_0.
    """
    rs = [Fraction(r) for r in roots]
    if d is None:
        d = len(rs)
    if len(rs) != d:
        raise ValueError(f"need exactly d={d} roots, got {len(rs)}")
    if len(set(rs)) != len(rs):
        raise ValueError("roots must be pairwise distinct")
    c = RationalPoly.from_roots(rs).coeffs
    return AffineHyperplane(tuple(c[1:]), -c[0])


@dataclass(frozen=True)
class StandardConfiguration:
    """j interval masses on the moment curve in R^d.

    ``standard(j)`` gives intervals [i, i + 1], i = 1..j, with 2d = 3j + 1;
    other rational placements are accepted for verification experiments.
    """

    j: int
    d: int
    intervals: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def standard(cls, j: int) -> "StandardConfiguration":
        if j < 1 or j % 2 == 0:
            raise ValueError("standard configuration needs odd j >= 1")
        d = (3 * j + 1) // 2
        return cls(j, d, tuple((Fraction(i), Fraction(i + 1)) for i in range(1, j + 1)))

    def masses(self) -> list[MomentIntervals]:
        return [MomentIntervals(self.d, (iv,)) for iv in self.intervals]


@dataclass(frozen=True)
class EquipartitionCertificate:
    j: int
    d: int
    subset: tuple[int, ...]
    roots1: tuple[Fraction, ...]
    roots2: tuple[Fraction, ...]
    h1: AffineHyperplane
    h2: AffineHyperplane
    orthant_table: tuple[tuple[Fraction, ...], ...] = field(default=())

    @property
    def arrangement(self) -> Arrangement:
        return Arrangement((self.h1, self.h2))

    def to_json(self) -> dict:
        def hp(roots, h):
            obj = {"roots": [format_scalar(r) for r in roots]}
            obj.update(h.to_json())
            return obj

        return {
            "j": self.j,
            "d": self.d,
            "subset": list(self.subset),
            "h1": hp(self.roots1, self.h1),
            "h2": hp(self.roots2, self.h2),
            "orthants": [[format_scalar(x) for x in row] for row in self.orthant_table],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EquipartitionCertificate":
        def hp(o):
            roots = tuple(Fraction(r) for r in o["roots"])
            h = AffineHyperplane(tuple(Fraction(x) for x in o["normal"]), Fraction(o["offset"]))
            return roots, h

        r1, h1 = hp(obj["h1"])
        r2, h2 = hp(obj["h2"])
        table = tuple(tuple(Fraction(x) for x in row) for row in obj.get("orthants", []))
        return cls(int(obj["j"]), int(obj["d"]), tuple(obj["subset"]), r1, r2, h1, h2, table)


def standard_roots(j: int, subset: Sequence[int]) -> tuple[list[Fraction], list[Fraction]]:
    """Curve parameters of H1 and H2 for the subset S of masses cut once by H1."""
    s = set(subset)
    r1: list[Fraction] = []
    r2: list[Fraction] = [Fraction(0)]
    for i in range(1, j + 1):
        mid = [i + Fraction(1, 2)]
        quarters = [i + Fraction(1, 4), i + Fraction(3, 4)]
        if i in s:
            r1 += mid
            r2 += quarters
        else:
            r1 += quarters
            r2 += mid
    return sorted(r1), sorted(r2)


def _pieces(polys, roots_by_poly, lo: Fraction, hi: Fraction):
    cuts = {lo, hi}
    for rs in roots_by_poly:
        cuts.update(r for r in rs if lo < r < hi)
    pts = sorted(cuts)
    for a, b in zip(pts, pts[1:]):
        mid = (a + b) / 2
        yield a, b, tuple(0 if p(mid) > 0 else 1 for p in polys)


def _check_curve_roots(h: AffineHyperplane, roots: Sequence[Fraction], d: int, name: str):
    p = h.curve_polynomial()
    if p.degree != d:
        raise CertificateError(f"{name}: curve polynomial has degree {p.degree}, expected {d}")
    if len(roots) != d or len(set(roots)) != d:
        raise CertificateError(f"{name}: expected {d} distinct roots, got {len(roots)}")
    for r in roots:
        if p(r) != 0:
            raise CertificateError(f"{name}: t={r} is not a crossing of the curve")
    found = all_real_roots(p)
    if len(found) != d:
        raise CertificateError(f"{name}: meets the curve in {len(found)} points, expected {d}")
    if any(z.multiplicity > 1 for z in found):
        raise CertificateError(f"{name}: root of multiplicity > 1")


def verify_certificate(
    cert: EquipartitionCertificate, config: Optional[StandardConfiguration] = None
) -> tuple[tuple[Fraction, ...], ...]:
    """Exact 4 x j orthant table of the certificate; raises CertificateError unless all are 1/4.

    Rows follow label index order (00, 01, 10, 11); columns are masses.
    """
    if config is None:
        config = StandardConfiguration.standard(cert.j)
    if config.j != cert.j or config.d != cert.d:
        raise CertificateError("certificate and configuration sizes differ")
    if not (cert.h1.exact and cert.h2.exact):
        raise CertificateError("certificate hyperplanes must be rational")
    _check_curve_roots(cert.h1, cert.roots1, cert.d, "H1")
    _check_curve_roots(cert.h2, cert.roots2, cert.d, "H2")

    polys = (cert.h1.curve_polynomial(), cert.h2.curve_polynomial())
    cols = []
    for lo, hi in config.intervals:
        col = [Fraction(0)] * 4
        for a, b, lab in _pieces(polys, (cert.roots1, cert.roots2), lo, hi):
            col[label_index(lab)] += (b - a) / (hi - lo)
        cols.append(col)
    table = tuple(tuple(cols[m][r] for m in range(len(cols))) for r in range(4))
    for r, lab in enumerate(labels(2)):
        for m in range(len(cols)):
            if table[r][m] != QUARTER:
                raise CertificateError(
                    f"mass {m + 1}, orthant {lab}: measure {table[r][m]} "
                    f"(off by {table[r][m] - QUARTER})",
                    mass=m + 1,
                    label=lab,
                    value=table[r][m],
                )
    return table


def _build(j: int, subset: tuple[int, ...]) -> EquipartitionCertificate:
    d = (3 * j + 1) // 2
    r1, r2 = standard_roots(j, subset)
    h1 = hyperplane_through(r1, d).normalized()
    h2 = hyperplane_through(r2, d).normalized()
    cert = EquipartitionCertificate(j, d, subset, tuple(r1), tuple(r2), h1, h2)
    table = verify_certificate(cert)
    return EquipartitionCertificate(j, d, subset, tuple(r1), tuple(r2), h1, h2, table)


def enumerate_standard(j: int, workers: int = 1) -> list[EquipartitionCertificate]:
    """All C(j, (j-1)/2) verified certificates, ordered lexicographically by subset."""
    if j < 1 or j % 2 == 0 or j > ENUMERATE_MAX_J:
        raise ValueError(f"j must be odd with 1 <= j <= {ENUMERATE_MAX_J}")
    subsets = list(itertools.combinations(range(1, j + 1), (j - 1) // 2))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda s: _build(j, s), subsets))
    return [_build(j, s) for s in subsets]


def intersection_count(h: AffineHyperplane, lo, hi) -> int:
    """Distinct crossings of the moment curve with parameter in [lo, hi]."""
    return len(real_roots_in_interval(h.curve_polynomial(), lo, hi))


def degree_magnitude(j: int) -> int:
    """|deg| of the test map restricted to linear hyperplanes, standard configuration."""
    if j < 1 or j % 2 == 0:
        raise ValueError("j must be odd")
    d = (3 * j + 1) // 2
    return 2 * math.comb(j, (j - 1) // 2) if d % 2 == 0 else 0


@dataclass(frozen=True)
class RamosDecision:
    j: int
    d: int
    certified: Optional[int]
    degree: int
    reasons: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "k": 2,
            "d": self.d,
            "certified": self.certified,
            "degree": self.degree,
            "reasons": list(self.reasons),
        }


def decide_ramos_two(j: int) -> RamosDecision:
    """Degree test for Delta(j, 2) = (3j + 1)/2 via the moment-curve configuration."""
    if j < 1 or j % 2 == 0:
        raise ValueError("j must be odd")
    k = 2
    d = (3 * j + 1) // 2
    assert k * (d - 1) == (2**k - 1) * j - 1
    reasons = []
    if (k * (d - 1)) % d == 0:
        reasons.append(f"d={d} divides k(d-1)={k * (d - 1)}")
    degree = degree_magnitude(j)
    if d % 2 == 1:
        reasons.append(f"d odd, degree vanishes (d={d})")
    else:
        # v_2(2 C(j, (j-1)/2)) = 1 + carries; need it below v_2(2^k k!) = 3
        v2 = 1 + kummer_carries(j, (j - 1) // 2, 2)
        if v2 >= 3:
            reasons.append(f"degree {degree} is divisible by 8 (2-adic valuation {v2})")
    if reasons:
        return RamosDecision(j, d, None, degree, tuple(reasons))
    return RamosDecision(
        j, d, d, degree, (f"degree {degree} = {degree % 8} mod 8, nonzero; Delta({j},2) = {d}",)
    )
