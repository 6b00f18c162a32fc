"""Exact univariate polynomials over Q and real-root isolation.

Isolation uses Descartes' rule of signs with bisection on the square-free
part (Vincent-Collins-Akritas style).  Sturm sequences are provided as an
independent root counter for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

REFINE_WIDTH = Fraction(1, 2**40)


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class RationalPoly:
    """Polynomial with rational coefficients, lowest degree first.

    The zero polynomial has an empty coefficient tuple.
    """

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "RationalPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1]

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RationalPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return self + (-other)

    def __mul__(self, other) -> "RationalPoly":
        if not isinstance(other, RationalPoly):
            return RationalPoly(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> "RationalPoly":
        return RationalPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def divmod(self, other: "RationalPoly") -> tuple["RationalPoly", "RationalPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        q = [Fraction(0)] * max(len(rem) - dq, 0)
        lead = other.lead
        for i in range(len(rem) - 1, dq - 1, -1):
            f = rem[i] / lead
            if f == 0:
                continue
            q[i - dq] = f
            for j, c in enumerate(other.coeffs):
                rem[i - dq + j] -= f * c
        return RationalPoly(q), RationalPoly(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "RationalPoly":
        if self.is_zero():
            return self
        return RationalPoly(c / self.lead for c in self.coeffs)

    def primitive(self) -> tuple[int, ...]:
        """Integer coefficients with unit content and positive leading term."""
        if self.is_zero():
            return ()
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        sign = 1 if ints[-1] > 0 else -1
        return tuple(sign * x // g for x in ints)

    def compose_affine(self, a, b) -> "RationalPoly":
        """Return q(x) = p(a + b*x)."""
        out = RationalPoly()
        lin = RationalPoly([a, b])
        for c in reversed(self.coeffs):
            out = out * lin + RationalPoly([c])
        return out

    def __repr__(self) -> str:
        return f"RationalPoly({[str(c) for c in self.coeffs]})"


def poly_gcd(a: RationalPoly, b: RationalPoly) -> RationalPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def square_free_part(p: RationalPoly) -> RationalPoly:
    if p.degree <= 0:
        return p.monic()
    return (p // poly_gcd(p, p.derivative())).monic()


def square_free_factorization(p: RationalPoly) -> list[tuple[RationalPoly, int]]:
    """Yun's algorithm: p = c * prod f_i**i with f_i square-free and coprime."""
    if p.is_zero():
        raise ValueError("zero polynomial has no square-free factorization")
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    i = 1
    while b.degree > 0:
        d = c - b.derivative()
        f = poly_gcd(b, d)
        if f.degree > 0:
            out.append((f, i))
        b = b // f
        c = d // f
        i += 1
    return out


def sign_variations(seq: Iterable) -> int:
    last = 0
    count = 0
    for x in seq:
        if x == 0:
            continue
        s = 1 if x > 0 else -1
        if last and s != last:
            count += 1
        last = s
    return count


def _taylor_shift_one(c: list[Fraction]) -> list[Fraction]:
    c = list(c)
    n = len(c)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] += c[j + 1]
    return c


def descartes_bound(p: RationalPoly, lo: Fraction, hi: Fraction) -> int:
    """Upper bound (with parity) on the number of roots of p in the open interval (lo, hi)."""
    q = p.compose_affine(lo, hi - lo).coeffs
    # x^n q(1/(1+x)) has its positive roots in bijection with roots of q in (0, 1)
    return sign_variations(_taylor_shift_one(list(reversed(q))))


def cauchy_bound(p: RationalPoly) -> Fraction:
    lead = abs(p.lead)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def simplest_rational(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the closed interval [lo, hi]."""
    if lo > hi:
        raise ValueError("empty interval")
    fl = math.floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    return fl + 1 / simplest_rational(1 / (hi - fl), 1 / (lo - fl))


@dataclass(frozen=True)
class RealRoot:
    """A real root known either exactly or by an isolating open interval."""

    lo: Fraction
    hi: Fraction
    value: Optional[Fraction] = None
    multiplicity: int = 1

    @property
    def is_rational(self) -> bool:
        return self.value is not None

    def approx(self) -> float:
        if self.value is not None:
            return float(self.value)
        return float((self.lo + self.hi) / 2)


def _isolate_square_free(
    sp: RationalPoly, lo: Fraction, hi: Fraction, width: Fraction
) -> list[RealRoot]:
    """Roots of a square-free polynomial in the open interval (lo, hi)."""
    lead_int = abs(sp.primitive()[-1])
    # below this width the only rational with denominator <= lead_int is the root itself
    rat_width = Fraction(1, lead_int * lead_int + 1)
    found: list[RealRoot] = []
    stack = [(lo, hi)]
    while stack:
        l, r = stack.pop()
        v = descartes_bound(sp, l, r)
        if v == 0:
            continue
        if v == 1:
            found.append(_refine(sp, l, r, min(width, rat_width)))
            continue
        m = (l + r) / 2
        if sp(m) == 0:
            found.append(RealRoot(m, m, m))
        stack.append((l, m))
        stack.append((m, r))
    return found


def _refine(sp: RationalPoly, l: Fraction, r: Fraction, width: Fraction) -> RealRoot:
    # l may itself be a (simple) root; the sign just right of it is that of sp'
    vl = sp(l)
    sl = (vl if vl != 0 else sp.derivative()(l)) > 0
    while r - l >= width:
        m = (l + r) / 2
        vm = sp(m)
        if vm == 0:
            return RealRoot(m, m, m)
        if (vm > 0) == sl:
            l = m
        else:
            r = m
    c = simplest_rational(l, r)
    if sp(c) == 0:
        return RealRoot(c, c, c)
    return RealRoot(l, r, None)


def _separate(roots: list[RealRoot], polys: dict[int, RationalPoly]) -> list[RealRoot]:
    """Sort roots, bisecting overlapping isolating intervals from different factors."""
    roots = sorted(roots, key=lambda z: (z.lo, z.hi))
    changed = True
    while changed:
        changed = False
        for i in range(len(roots) - 1):
            a, b = roots[i], roots[i + 1]
            if a.hi > b.lo:
                roots[i] = _halve(a, polys[a.multiplicity])
                roots[i + 1] = _halve(b, polys[b.multiplicity])
                roots.sort(key=lambda z: (z.lo, z.hi))
                changed = True
                break
    return roots


def _halve(z: RealRoot, sp: RationalPoly) -> RealRoot:
    if z.is_rational:
        return z
    out = _refine(sp, z.lo, z.hi, (z.hi - z.lo) / 2)
    return RealRoot(out.lo, out.hi, out.value, z.multiplicity)


def real_roots_in_interval(
    p: RationalPoly, lo, hi, width: Fraction = REFINE_WIDTH
) -> list[RealRoot]:
    """All distinct real roots of p in the closed interval [lo, hi], sorted.

    Each root is either exact (rational roots are always detected) or given by
    an isolating interval narrower than ``width``.  Multiplicities come from a
    square-free factorization.
    """
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError("empty interval")
    if p.degree == 0:
        return []
    roots: list[RealRoot] = []
    polys: dict[int, RationalPoly] = {}
    for f, mult in square_free_factorization(p):
        polys[mult] = f
        for e in (lo, hi) if lo != hi else (lo,):
            if f(e) == 0:
                roots.append(RealRoot(e, e, e, mult))
        if lo < hi:
            for z in _isolate_square_free(f, lo, hi, width):
                roots.append(RealRoot(z.lo, z.hi, z.value, mult))
    return _separate(roots, polys)


def all_real_roots(p: RationalPoly, width: Fraction = REFINE_WIDTH) -> list[RealRoot]:
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    if p.degree == 0:
        return []
    b = cauchy_bound(p)
    # power-of-two bound keeps bisection midpoints dyadic
    e = 2 ** max(0, math.ceil(math.log2(b)) + 1)
    return real_roots_in_interval(p, -e, e, width)


def sturm_sequence(p: RationalPoly) -> list[RationalPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def sturm_count(p: RationalPoly, lo, hi) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi]."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    seq = sturm_sequence(p)
    lo, hi = Fraction(lo), Fraction(hi)
    return sign_variations(q(lo) for q in seq) - sign_variations(q(hi) for q in seq)


def rational_poly(coeffs: Sequence) -> RationalPoly:
    return RationalPoly(coeffs)
