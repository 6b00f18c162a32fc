"""Masses, hyperplane arrangements, signed permutations and the test map.

Orthant convention: label bit 0 selects the closed side <x, v> >= a, bit 1
the closed side <x, v> <= a.  Labels are tuples of bits, ordered
lexicographically (first hyperplane is the most significant bit).

Two scalar kinds exist: exact (``fractions.Fraction``) and float.  They never
mix within one evaluation; ``to_float`` converts exact objects, the reverse
direction is refused.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .poly import RationalPoly, real_roots_in_interval

Scalar = Union[Fraction, float]
Label = tuple[int, ...]


class ScalarKindError(TypeError):
    """Exact and float scalars were mixed, or an illegal conversion was requested."""


class DimensionError(ValueError):
    pass


def labels(k: int) -> list[Label]:
    """All 2**k orthant labels in index order."""
    return list(itertools.product((0, 1), repeat=k))


def label_index(label: Sequence[int]) -> int:
    idx = 0
    for b in label:
        idx = 2 * idx + (1 if b else 0)
    return idx


def _to_exact(x) -> Fraction:
    if isinstance(x, bool):
        raise ScalarKindError("booleans are not scalars")
    if isinstance(x, (int, Fraction, str)):
        return Fraction(x)
    if isinstance(x, (float, np.floating)):
        raise ScalarKindError("float -> rational conversion is not allowed")
    raise ScalarKindError(f"unsupported scalar {x!r}")


def _is_exact_value(x) -> bool:
    return isinstance(x, (int, Fraction, str)) and not isinstance(x, bool)


def parse_scalar(x, exact: bool) -> Scalar:
    return _to_exact(x) if exact else float(x)


def format_scalar(x: Scalar):
    """JSON form: rationals as 'p/q' strings, floats as numbers."""
    if isinstance(x, Fraction):
        return str(x)
    return float(x)


# ---------------------------------------------------------------- hyperplanes


@dataclass(frozen=True)
class AffineHyperplane:
    """H = {x : <x, normal> = offset} with a nonzero normal."""

    normal: tuple
    offset: Scalar

    def __post_init__(self):
        normal = tuple(self.normal)
        values = normal + (self.offset,)
        floats = [isinstance(x, (float, np.floating)) for x in values]
        if any(floats):
            if any(isinstance(x, Fraction) for x in values):
                raise ScalarKindError("mixed scalar kinds in hyperplane")
            normal = tuple(float(x) for x in normal)
            offset = float(self.offset)
        else:
            normal = tuple(_to_exact(x) for x in normal)
            offset = _to_exact(self.offset)
        if not normal:
            raise DimensionError("hyperplane needs dimension >= 1")
        if all(x == 0 for x in normal):
            raise ValueError("hyperplane normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", offset)

    @property
    def dim(self) -> int:
        return len(self.normal)

    @property
    def exact(self) -> bool:
        return isinstance(self.offset, Fraction)

    def __neg__(self) -> "AffineHyperplane":
        return AffineHyperplane(tuple(-x for x in self.normal), -self.offset)

    def normalized(self) -> "AffineHyperplane":
        """Canonical form of the same oriented-up-to-sign hyperplane.

        Floats: unit normal.  Rationals: integer coordinates with unit
        content whose first nonzero entry of (normal, offset) is positive.
        """
        if not self.exact:
            n = math.sqrt(sum(x * x for x in self.normal))
            return AffineHyperplane(tuple(x / n for x in self.normal), self.offset / n)
        coords = list(self.normal) + [self.offset]
        den = math.lcm(*(c.denominator for c in coords))
        ints = [int(c * den) for c in coords]
        g = math.gcd(*ints)
        sign = 1 if next(c for c in ints if c != 0) > 0 else -1
        ints = [sign * c // g for c in ints]
        return AffineHyperplane(tuple(Fraction(c) for c in ints[:-1]), Fraction(ints[-1]))

    def to_float(self) -> "AffineHyperplane":
        return AffineHyperplane(tuple(float(x) for x in self.normal), float(self.offset))

    def curve_polynomial(self) -> RationalPoly:
        """p(t) = <gamma(t), normal> - offset on the moment curve gamma(t) = (t, ..., t^d)."""
        if not self.exact:
            raise ScalarKindError("curve polynomials need exact hyperplanes")
        return RationalPoly((-self.offset,) + self.normal)

    def to_json(self) -> dict:
        return {
            "normal": [format_scalar(x) for x in self.normal],
            "offset": format_scalar(self.offset),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AffineHyperplane":
        exact = any(isinstance(x, str) for x in list(obj["normal"]) + [obj["offset"]])
        return cls(
            tuple(parse_scalar(x, exact) for x in obj["normal"]),
            parse_scalar(obj["offset"], exact),
        )


@dataclass(frozen=True)
class Arrangement:
    hyperplanes: tuple[AffineHyperplane, ...]

    def __post_init__(self):
        hs = tuple(self.hyperplanes)
        if not hs:
            raise ValueError("arrangement needs at least one hyperplane")
        d = hs[0].dim
        if any(h.dim != d for h in hs):
            raise DimensionError("hyperplanes of different dimensions")
        if len(hs) > d:
            raise DimensionError(f"k={len(hs)} hyperplanes exceed dimension d={d}")
        if len({h.exact for h in hs}) > 1:
            raise ScalarKindError("mixed scalar kinds in arrangement")
        object.__setattr__(self, "hyperplanes", hs)

    @property
    def k(self) -> int:
        return len(self.hyperplanes)

    @property
    def dim(self) -> int:
        return self.hyperplanes[0].dim

    @property
    def exact(self) -> bool:
        return self.hyperplanes[0].exact

    def __getitem__(self, i: int) -> AffineHyperplane:
        return self.hyperplanes[i]

    def __iter__(self):
        return iter(self.hyperplanes)

    def __len__(self):
        return len(self.hyperplanes)

    def to_float(self) -> "Arrangement":
        return Arrangement(tuple(h.to_float() for h in self.hyperplanes))

    def to_json(self) -> dict:
        return {"hyperplanes": [h.to_json() for h in self.hyperplanes]}

    @classmethod
    def from_json(cls, obj: dict) -> "Arrangement":
        return cls(tuple(AffineHyperplane.from_json(h) for h in obj["hyperplanes"]))

    @classmethod
    def from_vector(cls, x: np.ndarray, k: int, d: int) -> "Arrangement":
        """Float arrangement from a flat (normal, offset) * k parameter vector."""
        x = np.asarray(x, dtype=float).reshape(k, d + 1)
        return cls(tuple(AffineHyperplane(tuple(row[:d]), row[d]) for row in x))


# ---------------------------------------------------------------------- masses


class PointCloud:
    """Empirical measure: weighted points (n x d), weights positive and summing to 1.

    Exact clouds store object arrays of ``Fraction``; float clouds float64.
    """

    def __init__(self, points, weights=None):
        pts = np.asarray(points, dtype=object)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise DimensionError("points must be a non-empty n x d array")
        n = pts.shape[0]
        flat = list(pts.ravel())
        exact = all(_is_exact_value(x) for x in flat)
        if weights is None:
            weights = [Fraction(1, n)] * n if exact else [1.0 / n] * n
        w = list(weights) if not isinstance(weights, np.ndarray) else list(weights.ravel())
        if len(w) != n:
            raise DimensionError("one weight per point required")
        if exact:
            pts = np.array([_to_exact(x) for x in flat], dtype=object).reshape(pts.shape)
            w = np.array([_to_exact(x) for x in w], dtype=object)
            if sum(w, Fraction(0)) != 1:
                raise ValueError("weights must sum to 1")
        else:
            if any(isinstance(x, Fraction) for x in flat + w):
                raise ScalarKindError("mixed scalar kinds in point cloud")
            pts = np.asarray(pts, dtype=float)
            w = np.asarray(w, dtype=float)
            if abs(w.sum() - 1.0) > 1e-12:
                raise ValueError("weights must sum to 1")
        if any(x <= 0 for x in w):
            raise ValueError("weights must be positive")
        self.points = pts
        self.weights = w
        self.exact = exact

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def to_float(self) -> "PointCloud":
        if not self.exact:
            return self
        return PointCloud(self.points.astype(float), self.weights.astype(float))

    def to_json(self) -> dict:
        return {
            "type": "points",
            "points": [[format_scalar(x) for x in row] for row in self.points],
            "weights": [format_scalar(x) for x in self.weights],
        }

    def __repr__(self):
        kind = "exact" if self.exact else "float"
        return f"PointCloud(n={len(self)}, d={self.dim}, {kind})"


@dataclass(frozen=True)
class MomentIntervals:
    """Mass uniform in the parameter t over disjoint intervals of the moment curve.

    Total parameter length is normalized to mass 1.
    """

    dimension: int
    intervals: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        ivs = tuple(sorted((_to_exact(a), _to_exact(b)) for a, b in self.intervals))
        if self.dimension < 1:
            raise DimensionError("dimension must be >= 1")
        if not ivs:
            raise ValueError("at least one interval required")
        for a, b in ivs:
            if not a < b:
                raise ValueError(f"degenerate interval [{a}, {b}]")
            if a <= 0 <= b:
                raise ValueError("intervals must exclude the origin")
        for (_, b), (c, _) in zip(ivs, ivs[1:]):
            if c <= b:
                raise ValueError("intervals must be pairwise disjoint")
        object.__setattr__(self, "intervals", ivs)

    exact = True

    @property
    def dim(self) -> int:
        return self.dimension

    @property
    def total_length(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), Fraction(0))

    def sample(self, n_per_interval: int) -> PointCloud:
        """Float point cloud on gamma: midpoint rule, n equal-weight points per unit length."""
        ts = []
        for a, b in self.intervals:
            m = max(1, round(n_per_interval * float(b - a)))
            step = float(b - a) / m
            ts.extend(float(a) + step * (i + 0.5) for i in range(m))
        t = np.asarray(ts)
        pts = t[:, None] ** np.arange(1, self.dimension + 1)[None, :]
        return PointCloud(pts, np.full(len(t), 1.0 / len(t)))

    def to_json(self) -> dict:
        return {
            "type": "moment_intervals",
            "intervals": [[format_scalar(a), format_scalar(b)] for a, b in self.intervals],
        }


MassModel = Union[PointCloud, MomentIntervals]


class IrrationalBoundaryError(ValueError):
    """A hyperplane crosses a moment-curve mass at an irrational parameter."""


def _interval_pieces(polys: Sequence[RationalPoly], a: Fraction, b: Fraction):
    """Split [a, b] at the roots of all polys; yield (length, label) per piece."""
    cuts = {a, b}
    for p in polys:
        if p.is_zero():
            raise ValueError("hyperplane contains the whole curve")
        for r in real_roots_in_interval(p, a, b):
            if not r.is_rational:
                raise IrrationalBoundaryError(
                    f"crossing in ({float(r.lo)}, {float(r.hi)}) is irrational; "
                    "exact measure is not rational"
                )
            cuts.add(r.value)
    pts = sorted(cuts)
    for lo, hi in zip(pts, pts[1:]):
        mid = (lo + hi) / 2
        yield hi - lo, tuple(0 if p(mid) > 0 else 1 for p in polys)


def _check_dims(mass: MassModel, arr: Arrangement):
    if mass.dim != arr.dim:
        raise DimensionError(f"mass dimension {mass.dim} != arrangement dimension {arr.dim}")
    if mass.exact != arr.exact:
        raise ScalarKindError("mass and arrangement use different scalar kinds")


def _side_masks(cloud: PointCloud, arr: Arrangement):
    ge, le = [], []
    for h in arr:
        if cloud.exact:
            proj = cloud.points.dot(np.array(h.normal, dtype=object))
        else:
            proj = cloud.points @ np.asarray(h.normal)
        ge.append(proj >= h.offset)
        le.append(proj <= h.offset)
    return ge, le


def _cloud_table(cloud: PointCloud, arr: Arrangement) -> list:
    ge, le = _side_masks(cloud, arr)
    zero = Fraction(0) if cloud.exact else 0.0
    out = []
    for lab in labels(arr.k):
        mask = np.ones(len(cloud), dtype=bool)
        for i, b in enumerate(lab):
            mask &= le[i] if b else ge[i]
        out.append(cloud.weights[mask].sum() if mask.any() else zero)
    return out


def _moment_table(mass: MomentIntervals, arr: Arrangement) -> list:
    polys = [h.curve_polynomial() for h in arr]
    acc = [Fraction(0)] * (2 ** arr.k)
    for a, b in mass.intervals:
        for length, lab in _interval_pieces(polys, a, b):
            acc[label_index(lab)] += length
    total = mass.total_length
    return [x / total for x in acc]


def orthant_table(mass: MassModel, arr: Arrangement) -> list:
    """Measures of all 2**k closed orthants, in label index order."""
    _check_dims(mass, arr)
    if isinstance(mass, MomentIntervals):
        return _moment_table(mass, arr)
    return _cloud_table(mass, arr)


def orthant_measure(mass: MassModel, arr: Arrangement, label: Sequence[int]) -> Scalar:
    if len(label) != arr.k or any(b not in (0, 1) for b in label):
        raise ValueError(f"label must be {arr.k} bits")
    return orthant_table(mass, arr)[label_index(label)]


def in_general_position(mass: MassModel, arr: Arrangement) -> bool:
    """True iff no point of a cloud lies exactly on a hyperplane."""
    if isinstance(mass, MomentIntervals):
        return True
    ge, le = _side_masks(mass, arr)
    return not any((g & l).any() for g, l in zip(ge, le))


# ------------------------------------------------------------------ test map


@dataclass(frozen=True)
class TestVector:
    """Orthant deviations mu_l(O_alpha) - 2**-k; ``values[l, label_index(alpha)]``."""

    k: int
    values: np.ndarray

    __test__ = False

    @property
    def j(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, key):
        ell, lab = key
        return self.values[ell, label_index(lab)]

    def max_abs(self) -> float:
        return float(max(abs(x) for x in self.values.ravel()))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.values.ravel())

    def sums(self) -> list:
        return [sum(row, Fraction(0) if isinstance(row[0], Fraction) else 0.0) for row in self.values]

    def __eq__(self, other):
        return (
            isinstance(other, TestVector)
            and self.k == other.k
            and self.values.shape == other.values.shape
            and all(x == y for x, y in zip(self.values.ravel(), other.values.ravel()))
        )

    def allclose(self, other: "TestVector", atol: float) -> bool:
        a = np.asarray(self.values, dtype=float)
        b = np.asarray(other.values, dtype=float)
        return self.k == other.k and a.shape == b.shape and bool(np.all(np.abs(a - b) <= atol))


def eval_test_map(masses: Sequence[MassModel], arr: Arrangement) -> TestVector:
    if not masses:
        raise ValueError("at least one mass required")
    target = Fraction(1, 2**arr.k) if arr.exact else 2.0**-arr.k
    rows = [[m - target for m in orthant_table(mass, arr)] for mass in masses]
    dtype = object if arr.exact else float
    return TestVector(arr.k, np.array(rows, dtype=dtype))


def is_equipartition(masses: Sequence[MassModel], arr: Arrangement, eps=0) -> bool:
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if eps == 0 and not arr.exact:
        raise ScalarKindError("eps = 0 is only meaningful for exact masses")
    tv = eval_test_map(masses, arr)
    return all(abs(x) <= eps for x in tv.values.ravel())


# ---------------------------------------------------------------------- group


@dataclass(frozen=True)
class GroupElement:
    """Signed permutation (beta, tau) in (Z/2)^k x| S_k.

    ``perm[i]`` is tau(i), 0-based.  Acts on the left:
    (g*h).act(x) == g.act(h.act(x)).
    """

    signs: tuple[int, ...]
    perm: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(b) for b in self.signs)
        perm = tuple(int(p) for p in self.perm)
        if len(signs) != len(perm):
            raise ValueError("signs and permutation sizes differ")
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"{perm} is not a permutation")
        if any(b not in (0, 1) for b in signs):
            raise ValueError("signs must be bits")
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "perm", perm)

    @property
    def k(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, k: int) -> "GroupElement":
        return cls((0,) * k, tuple(range(k)))

    @classmethod
    def random(cls, k: int, rng: np.random.Generator) -> "GroupElement":
        return cls(tuple(rng.integers(0, 2, size=k)), tuple(rng.permutation(k)))

    @classmethod
    def all(cls, k: int) -> list["GroupElement"]:
        return [
            cls(s, p)
            for p in itertools.permutations(range(k))
            for s in itertools.product((0, 1), repeat=k)
        ]

    def inverse_perm(self) -> tuple[int, ...]:
        inv = [0] * self.k
        for i, p in enumerate(self.perm):
            inv[p] = i
        return tuple(inv)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.k != other.k:
            raise ValueError("group elements of different size")
        inv = self.inverse_perm()
        signs = tuple((self.signs[i] + other.signs[inv[i]]) % 2 for i in range(self.k))
        perm = tuple(self.perm[other.perm[i]] for i in range(self.k))
        return GroupElement(signs, perm)

    def inverse(self) -> "GroupElement":
        return GroupElement(tuple(self.signs[p] for p in self.perm), self.inverse_perm())

    def act_on_label(self, label: Sequence[int]) -> Label:
        if len(label) != self.k:
            raise ValueError("label size mismatch")
        inv = self.inverse_perm()
        return tuple((self.signs[i] + label[inv[i]]) % 2 for i in range(self.k))


def act_on_arrangement(g: GroupElement, arr: Arrangement) -> Arrangement:
    """Hyperplane i of the result is hyperplane tau^-1(i), negated iff beta_i = 1."""
    if g.k != arr.k:
        raise ValueError(f"group element of size {g.k} on {arr.k} hyperplanes")
    inv = g.inverse_perm()
    out = []
    for i in range(arr.k):
        h = arr[inv[i]]
        out.append(-h if g.signs[i] else h)
    return Arrangement(tuple(out))


def act_on_test_vector(g: GroupElement, tv: TestVector) -> TestVector:
    if g.k != tv.k:
        raise ValueError(f"group element of size {g.k} on k={tv.k} test vector")
    out = np.empty_like(tv.values)
    for lab in labels(tv.k):
        out[:, label_index(g.act_on_label(lab))] = tv.values[:, label_index(lab)]
    return TestVector(tv.k, out)


# ------------------------------------------------------------------------ I/O


def mass_from_json(obj: dict, dimension: int) -> MassModel:
    kind = obj.get("type")
    if kind == "points":
        pts = obj["points"]
        if any(len(row) != dimension for row in pts):
            raise DimensionError("point dimension does not match 'dimension'")
        exact = all(isinstance(x, str) for row in pts for x in row)
        points = [[parse_scalar(x, exact) for x in row] for row in pts]
        w = obj.get("weights")
        if w is not None:
            w = [parse_scalar(x, exact) for x in w]
        return PointCloud(points, w)
    if kind == "moment_intervals":
        return MomentIntervals(dimension, tuple((a, b) for a, b in obj["intervals"]))
    raise ValueError(f"unknown mass type {kind!r}")


def load_masses(obj: Union[dict, str]) -> tuple[int, list[MassModel]]:
    if isinstance(obj, str):
        obj = json.loads(obj)
    d = int(obj["dimension"])
    return d, [mass_from_json(m, d) for m in obj["masses"]]


def dump_masses(dimension: int, masses: Iterable[MassModel]) -> dict:
    return {"dimension": dimension, "masses": [m.to_json() for m in masses]}
