import json
import math
from dataclasses import replace
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equipart.model import eval_test_map, labels
from equipart.moment import (
    CertificateError,
    EquipartitionCertificate,
    StandardConfiguration,
    _pieces,
    decide_ramos_two,
    degree_magnitude,
    enumerate_standard,
    hyperplane_through,
    intersection_count,
    standard_roots,
    verify_certificate,
)

Q = F(1, 4)


def test_hyperplane_through_examples():
    h = hyperplane_through([0], 1)
    assert h.normal == (1,) and h.offset == 0
    h = hyperplane_through([1, 2], 2)
    assert h.normal == (-3, 1) and h.offset == -2


def test_hyperplane_through_rejects_duplicates():
    with pytest.raises(ValueError):
        hyperplane_through([1, 1], 2)
    with pytest.raises(ValueError):
        hyperplane_through([1, 2, 3], 2)


@settings(max_examples=50, deadline=None)
@given(st.sets(st.fractions(min_value=-5, max_value=5, max_denominator=9), min_size=1, max_size=7))
def test_hyperplane_contains_curve_points(roots):
    rs = sorted(roots)
    d = len(rs)
    h = hyperplane_through(rs, d)
    for t in rs:
        point = [t**e for e in range(1, d + 1)]
        assert sum(v * x for v, x in zip(h.normal, point)) - h.offset == 0
    assert intersection_count(h, -6, 6) == d


def test_j1_certificate():
    (cert,) = enumerate_standard(1)
    assert cert.subset == ()
    assert list(cert.roots1) == [F(5, 4), F(7, 4)]
    assert list(cert.roots2) == [0, F(3, 2)]
    assert cert.orthant_table == ((Q,), (Q,), (Q,), (Q,))


@pytest.mark.parametrize("j,count", [(1, 1), (3, 3), (5, 10), (7, 35)])
def test_counts(j, count):
    certs = enumerate_standard(j, workers=4 if j == 7 else 1)
    assert len(certs) == count == math.comb(j, (j - 1) // 2)
    assert [c.subset for c in certs] == sorted(c.subset for c in certs)


def test_parallel_order_matches_serial():
    assert enumerate_standard(5, workers=4) == enumerate_standard(5)


def test_enumerate_rejects():
    for j in (0, 2, 11):
        with pytest.raises(ValueError):
            enumerate_standard(j)


@pytest.mark.parametrize("j", [1, 3, 5])
def test_certificate_properties(j):
    config = StandardConfiguration.standard(j)
    for cert in enumerate_standard(j):
        table = verify_certificate(cert, config)
        assert all(x == Q for row in table for x in row)
        for m in range(j):
            assert sum(table[r][m] for r in range(4)) == 1
        assert cert.h2.offset == 0
        assert 0 in cert.roots2
        for h in (cert.h1, cert.h2):
            assert intersection_count(h, 0, j + 2) == cert.d
        assert eval_test_map(config.masses(), cert.arrangement).is_zero()


@pytest.mark.parametrize("j", [1, 3, 5])
def test_label_coverage(j):
    config = StandardConfiguration.standard(j)
    for cert in enumerate_standard(j):
        polys = (cert.h1.curve_polynomial(), cert.h2.curve_polynomial())
        for lo, hi in config.intervals:
            pieces = list(_pieces(polys, (cert.roots1, cert.roots2), lo, hi))
            assert len(pieces) == 4
            assert all(b - a == Q for a, b, _ in pieces)
            labs = [lab for _, _, lab in pieces]
            assert sorted(labs) == labels(2)
            for x, y in zip(labs, labs[1:]):
                assert sum(p != q for p, q in zip(x, y)) == 1


def test_perturbed_certificate_fails_with_named_orthant():
    (cert,) = enumerate_standard(1)
    roots1 = (F(5, 4) + F(1, 100), F(7, 4))
    bad = replace(cert, roots1=roots1, h1=hyperplane_through(roots1, 2).normalized())
    with pytest.raises(CertificateError) as e:
        verify_certificate(bad)
    # stored hyperplanes are normalized, here -(monic): on [1, 126/100] p1 < 0,
    # p2 > 0 -> (1,0) gets 13/50; on [126/100, 3/2] both > 0 -> (0,0) gets 6/25.
    # (0,0) comes first in label order.
    err = e.value
    assert err.mass == 1
    assert err.label == (0, 0)
    assert err.value == F(6, 25)
    assert "orthant (0, 0)" in str(err) and "off by -1/100" in str(err)
    polys = (bad.h1.curve_polynomial(), bad.h2.curve_polynomial())
    pieces = {lab: b - a for a, b, lab in _pieces(polys, (bad.roots1, bad.roots2), F(1), F(2))}
    assert pieces == {(1, 0): F(13, 50), (0, 0): F(6, 25), (0, 1): Q, (1, 1): Q}


def test_wrong_roots_rejected():
    (cert,) = enumerate_standard(1)
    bad = replace(cert, roots1=(F(5, 4), F(8, 5)))
    with pytest.raises(CertificateError):
        verify_certificate(bad)


def test_json_round_trip():
    for cert in enumerate_standard(3):
        obj = json.loads(json.dumps(cert.to_json()))
        assert obj["orthants"] == [["1/4"] * 3] * 4
        assert all(isinstance(x, str) for x in obj["h1"]["roots"])
        back = EquipartitionCertificate.from_json(obj)
        assert back == cert
        verify_certificate(back)


def test_alternative_placement_recorded():
    # verifier accepts other rational placements; the midpoint/quartile
    # construction still balances uniform masses on shifted unit intervals
    j = 3
    shift = [(F(i) + F(1, 2), F(i) + F(3, 2)) for i in range(1, j + 1)]
    config = StandardConfiguration(j, 5, tuple(shift))
    s = (2,)
    r1, r2 = [], [F(0)]
    for n, (a, b) in enumerate(shift, start=1):
        mid, qs = [(a + b) / 2], [a + Q, a + 3 * Q]
        r1 += mid if n in s else qs
        r2 += qs if n in s else mid
    r1, r2 = sorted(r1), sorted(r2)
    cert = EquipartitionCertificate(
        j, 5, s, tuple(r1), tuple(r2),
        hyperplane_through(r1, 5).normalized(), hyperplane_through(r2, 5).normalized(),
    )
    table = verify_certificate(cert, config)
    assert all(x == Q for row in table for x in row)


def test_standard_roots_sizes():
    for j in (1, 3, 5, 7, 9):
        d = (3 * j + 1) // 2
        r1, r2 = standard_roots(j, tuple(range(1, (j - 1) // 2 + 1)))
        assert len(r1) == len(r2) == d


def test_degree_magnitude():
    assert degree_magnitude(5) == 20
    assert degree_magnitude(3) == 0
    assert degree_magnitude(1) == 2


def test_decide_examples():
    assert decide_ramos_two(5).certified == 8
    assert decide_ramos_two(9).certified == 14
    j3 = decide_ramos_two(3)
    assert j3.certified is None
    assert any(r.startswith("d odd") for r in j3.reasons)
    assert decide_ramos_two(1).certified is None


def test_decide_thm_family():
    for t in (2, 3, 4):
        assert decide_ramos_two(2**t + 1).certified == 3 * 2 ** (t - 1) + 2


def test_decide_agrees_with_direct_residue():
    for j in range(1, 80, 2):
        dec = decide_ramos_two(j)
        d = (3 * j + 1) // 2
        direct = d % 2 == 0 and (2 * (d - 1)) % d != 0 and degree_magnitude(j) % 8 != 0
        assert (dec.certified is not None) == direct
        if dec.certified is not None:
            assert dec.certified == d
