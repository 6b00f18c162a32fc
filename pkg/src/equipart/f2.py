"""Sparse multivariate polynomials over F_2 and binomial arithmetic.

A polynomial is a set of exponent vectors (coefficient 1 each).  Addition is
symmetric difference.  Power ideals <u_1^(d+1), ..., u_k^(d+1)> are monomial,
so reducing modulo one just drops monomials with some exponent > d.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional

Monomial = tuple[int, ...]

DICKSON_MAX_K = 6
CERTIFY_MAX_K = 4
CERTIFY_MAX_WORK = 10**4


@dataclass(frozen=True)
class PowerIdealCap:
    """The ideal <u_1^(d+1), ..., u_k^(d+1)>."""

    d: int

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("cap degree must be non-negative")

    def contains(self, m: Monomial) -> bool:
        return max(m, default=0) > self.d


@dataclass(frozen=True)
class PolyF2:
    k: int
    monomials: frozenset

    def __init__(self, k: int, monomials: Iterable[Monomial] = ()):
        ms = set()
        for m in monomials:
            m = tuple(int(e) for e in m)
            if len(m) != k or any(e < 0 for e in m):
                raise ValueError(f"bad exponent vector {m} for k={k}")
            ms ^= {m}
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "monomials", frozenset(ms))

    @classmethod
    def one(cls, k: int) -> "PolyF2":
        return cls(k, [(0,) * k])

    @classmethod
    def var(cls, k: int, i: int) -> "PolyF2":
        return cls(k, [tuple(1 if j == i else 0 for j in range(k))])

    def __len__(self):
        return len(self.monomials)

    def is_zero(self) -> bool:
        return not self.monomials

    def __add__(self, other: "PolyF2") -> "PolyF2":
        _same_arity(self, other)
        return PolyF2(self.k, self.monomials ^ other.monomials)

    def __mul__(self, other: "PolyF2") -> "PolyF2":
        return poly_mul(self, other)

    def reduce(self, cap: Optional[PowerIdealCap]) -> "PolyF2":
        if cap is None:
            return self
        return PolyF2(self.k, (m for m in self.monomials if not cap.contains(m)))

    def total_degree(self) -> int:
        return max((sum(m) for m in self.monomials), default=-1)

    def sorted_monomials(self) -> list[Monomial]:
        return sorted(self.monomials)

    def to_json(self) -> list[list[int]]:
        return [list(m) for m in sorted(self.monomials, reverse=True)]

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        terms = []
        for m in sorted(self.monomials, reverse=True):
            parts = [f"u{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e]
            terms.append("*".join(parts) or "1")
        return " + ".join(terms)


def _same_arity(a: PolyF2, b: PolyF2):
    if a.k != b.k:
        raise ValueError(f"arity mismatch: {a.k} vs {b.k}")


def poly_mul(a: PolyF2, b: PolyF2, cap: Optional[PowerIdealCap] = None) -> PolyF2:
    _same_arity(a, b)
    out: set[Monomial] = set()
    limit = cap.d if cap is not None else None
    for x in a.monomials:
        for y in b.monomials:
            m = tuple(p + q for p, q in zip(x, y))
            if limit is not None and max(m, default=0) > limit:
                continue
            if m in out:
                out.remove(m)
            else:
                out.add(m)
    return PolyF2(a.k, out)


def poly_square(p: PolyF2, cap: Optional[PowerIdealCap] = None) -> PolyF2:
    # Frobenius: cross terms cancel in characteristic 2
    return PolyF2(p.k, (tuple(2 * e for e in m) for m in p.monomials)).reduce(cap)


def poly_pow(p: PolyF2, j: int, cap: Optional[PowerIdealCap] = None) -> PolyF2:
    if j < 1:
        raise ValueError("exponent must be >= 1")
    top = max((max(m, default=0) for m in p.monomials), default=0)
    if top * j >= 2**63:
        raise OverflowError("exponents would exceed 63 bits")
    result: Optional[PolyF2] = None
    base = p.reduce(cap)
    while True:
        if j & 1:
            result = base if result is None else poly_mul(result, base, cap)
        j >>= 1
        if not j:
            break
        base = poly_square(base, cap)
    return result


def dickson_top(k: int) -> PolyF2:
    """Product of all 2^k - 1 nonzero linear forms over F_2, by direct expansion."""
    if not 1 <= k <= DICKSON_MAX_K:
        raise ValueError(f"k must be in [1, {DICKSON_MAX_K}]")
    p = PolyF2.one(k)
    for alpha in itertools.product((0, 1), repeat=k):
        if not any(alpha):
            continue
        form = PolyF2(k, [tuple(1 if j == i else 0 for j in range(k)) for i in range(k) if alpha[i]])
        p = poly_mul(p, form)
    return p


def dickson_top_permutation_sum(k: int) -> PolyF2:
    """Sum over permutations pi of u_pi(1)^(2^(k-1)) ... u_pi(k)^1."""
    if not 1 <= k <= DICKSON_MAX_K:
        raise ValueError(f"k must be in [1, {DICKSON_MAX_K}]")
    terms = []
    for pi in itertools.permutations(range(k)):
        m = [0] * k
        for pos, var in enumerate(pi):
            m[var] = 2 ** (k - 1 - pos)
        terms.append(tuple(m))
    return PolyF2(k, terms)


@dataclass(frozen=True)
class IndexCertificate:
    """p^j has a monomial with all exponents <= d_star, so Delta(j, k) <= d for d >= d_star."""

    j: int
    k: int
    d_star: int
    witness: Monomial

    def to_json(self) -> dict:
        return {"j": self.j, "k": self.k, "d_star": self.d_star, "witness": list(self.witness)}


def certify_upper_bound(j: int, k: int, cap: Optional[PowerIdealCap] = None) -> IndexCertificate:
    """Smallest d for which p^j lies outside the power ideal of Y_{d,k}.

    ``cap`` optionally prunes monomials during powering; it must be at least
    the true d_star or the search comes back empty.
    """
    if j < 1 or k < 1:
        raise ValueError("j and k must be positive")
    if k > CERTIFY_MAX_K or j * (2**k - 1) > CERTIFY_MAX_WORK:
        raise ValueError(
            f"(j={j}, k={k}) exceeds the guard k <= {CERTIFY_MAX_K}, j(2^k-1) <= {CERTIFY_MAX_WORK}"
        )
    pj = poly_pow(dickson_top(k), j, cap)
    if pj.is_zero():
        raise ValueError(f"cap d={cap.d} removed every monomial; raise the cap")
    best = min(pj.monomials, key=lambda m: (max(m), m))
    return IndexCertificate(j, k, max(best), best)


def binom_mod2(n: int, m: int) -> int:
    """C(n, m) mod 2 by Lucas: odd iff the binary digits of m are dominated by those of n."""
    if m < 0 or n < 0 or m > n:
        raise ValueError("need 0 <= m <= n")
    return 1 if (m & ~n) == 0 else 0


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


def kummer_carries(n: int, m: int, p: int) -> int:
    """Number of carries when adding m and n - m in base p (= p-adic valuation of C(n, m))."""
    if m < 0 or n < 0 or m > n:
        raise ValueError("need 0 <= m <= n")
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    a, b = m, n - m
    carry = 0
    count = 0
    while a or b or carry:
        s = a % p + b % p + carry
        carry = 1 if s >= p else 0
        count += carry
        a //= p
        b //= p
    return count
