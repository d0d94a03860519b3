from __future__ import annotations

import pytest

from khoval.complex import build_unnormalized, decompose, normalize
from khoval.diagram import add_kink, mirror, parse_pd
from khoval.homology import BigradedGroup, connecting_map, homology, homology_mod_p, universal_coefficients_mod_p
from oracles import entries, tables

TREFOIL = parse_pd("X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]")

# full SNF computation; rational part checked against the Jones polynomial below
TREFOIL_KH = {
    (0, 1): (1, ()),
    (0, 3): (1, ()),
    (2, 5): (1, ()),
    (3, 7): (0, (2,)),
    (3, 9): (1, ()),
}


def kh(d):
    return homology(normalize(build_unnormalized(d), d))


def test_unknot():
    h = kh(parse_pd("UNKNOT"))
    assert h.groups == {(0, -1): (1, ()), (0, 1): (1, ())}


def test_trefoil_table():
    h = kh(TREFOIL)
    assert h.groups == TREFOIL_KH
    assert h.euler() == {1: 1, 3: 1, 5: 1, 9: -1}
    assert sum(len(t) for _, (_, t) in h) == 1


def test_mirror_trefoil_torsion_moves_by_duality():
    # torsion at (i, j) reappears at (1 - i, -j) in the mirror
    h = kh(mirror(TREFOIL))
    assert h.torsion_support() == {(-2, -7)}
    assert h.rational().groups == kh(TREFOIL).mirrored().groups


def test_kinks_do_not_change_kh():
    for d in (parse_pd("UNKNOT"), TREFOIL):
        for positive in (True, False):
            assert kh(add_kink(d, positive=positive)).groups == kh(d).groups


@pytest.mark.parametrize("e", [e for e in entries() if e.diagram.n <= 7], ids=lambda e: e.id)
@pytest.mark.parametrize("p", [2, 3])
def test_universal_coefficients(e, p):
    cx = build_unnormalized(e.diagram)
    h = homology(cx)
    assert homology_mod_p(cx, p) == universal_coefficients_mod_p(h, p)


@pytest.mark.parametrize("e", [e for e in entries() if e.diagram.n <= 7], ids=lambda e: e.id)
def test_rational_rank_is_free_rank(e):
    hbar, _, _ = tables(e.id)
    d = e.diagram
    cx = build_unnormalized(d)
    # Q-ranks by a field computation at a large prime avoid the SNF entirely
    big = homology_mod_p(cx, 1_000_003)
    assert big == {bd: r for bd, (r, _) in hbar.groups.items() if r}


def test_json_rows_round_trip():
    h = kh(TREFOIL)
    rows = h.to_rows()
    assert rows == sorted(rows, key=lambda r: (r["i"], r["j"]))
    assert BigradedGroup.from_rows(rows).groups == h.groups
    assert '"torsion":[2]' in h.to_json()


def test_shifted_convention():
    h = BigradedGroup({(0, 0): (1, ())})
    assert h.shifted(1, 2).groups == {(-1, -2): (1, ())}


def test_kinked_unknot_connecting_map_is_the_merge():
    # two circles merge into one: a 1x2 block in the middle degree
    d = add_kink(parse_pd("UNKNOT"))
    cm = connecting_map(decompose(d, 0))
    assert {bd: m.shape for bd, m in cm.delta.items()} == {(0, -2): (0, 1), (0, 0): (1, 2), (0, 2): (1, 1)}
    assert cm.rank == {(0, -2): 0, (0, 0): 1, (0, 2): 1}


@pytest.mark.parametrize("e", [e for e in entries() if 0 < e.diagram.n <= 7], ids=lambda e: e.id)
def test_exact_sequence_ranks(e):
    d = e.diagram
    dec = decompose(d, d.n - 1)
    cm = connecting_map(dec)
    hbar = tables(e.id)[0].rational()
    h0 = homology(dec.c0).rational()
    h1 = homology(dec.c1).rational()
    for bd in hbar.support() | set(cm.h0) | set(cm.h1):
        assert hbar.rank(*bd) == cm.kernel_rank(bd) + cm.cokernel_rank(bd), bd
    assert hbar.support() <= h0.support() | h1.support()
