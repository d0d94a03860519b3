from __future__ import annotations

import random

import pytest

from khoval.complex import ChainComplex, build_unnormalized, decompose, normalize, shift
from khoval.cube import o
from khoval.diagram import add_kink, parse_pd
from khoval.errors import NotAComplex, OrderingViolation, TooManyCrossings, UnknownCrossing
from khoval.homology import homology
from oracles import count_loops, entries, reduced_alternating

TREFOIL = parse_pd("X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]")


def test_unknot_complex():
    cx = build_unnormalized(parse_pd("UNKNOT"))
    assert {bd: cx.dim(bd) for bd in cx.bidegrees()} == {(0, -1): 1, (0, 1): 1}
    assert not any(cx.diff.values())


def test_two_circle_unlink_after_normalizing():
    d = parse_pd("O,O")
    h = homology(normalize(build_unnormalized(d), d))
    assert {bd: h.rank(*bd) for bd in h.support()} == {(0, -2): 1, (0, 0): 2, (0, 2): 1}


def test_trefoil_generator_count():
    cx = build_unnormalized(TREFOIL)
    expected = 0
    for mask in range(8):
        ones = frozenset(k for k in range(3) if mask >> k & 1)
        expected += 2 ** count_loops(TREFOIL, ones)
    assert cx.total_dim == expected


@pytest.mark.parametrize("e", [e for e in entries() if e.diagram.n <= 7], ids=lambda e: e.id)
def test_d_squared_vanishes(e):
    build_unnormalized(e.diagram).check_d_squared()


def test_d_squared_checker_catches_bad_complex():
    gens = {(0, 0): ("a",), (1, 0): ("b",), (2, 0): ("c",)}
    diff = {(0, 0): {0: {0: 1}}, (1, 0): {0: {0: 1}}}
    with pytest.raises(NotAComplex):
        ChainComplex(gens, diff).check_d_squared()
    with pytest.raises(NotAComplex):
        homology(ChainComplex(gens, diff))


def test_generators_stay_in_the_box():
    for e in reduced_alternating():
        d = e.diagram
        cx = build_unnormalized(d)
        c, od = d.n, o(d)
        for i, j in cx.bidegrees():
            assert 0 <= i <= c and -od <= j <= 2 * c - od + 2, e.id
        assert cx.dim((0, -od)) == 1 and cx.dim((c, 2 * c - od + 2)) == 1, e.id


def test_shift_identity_and_inverse():
    cx = build_unnormalized(TREFOIL)
    assert shift(cx, 0, 0).gens == cx.gens and shift(cx, 0, 0).diff == cx.diff
    back = shift(shift(cx, 1, 2), -1, -2)
    assert back.gens == cx.gens and back.diff == cx.diff
    moved = shift(cx, 1, 2)
    assert moved.dim((-1, -2)) == cx.dim((0, 0))
    assert moved.offset == (1, 2)


def test_odd_shift_negates_differential():
    cx = build_unnormalized(TREFOIL)
    moved = shift(cx, 1, 0)
    for (i, j), m in cx.diff.items():
        for col, entries_ in m.items():
            for row, v in entries_.items():
                assert moved.diff[(i - 1, j)][col][row] == -v


def test_shifts_compose():
    cx = build_unnormalized(TREFOIL)
    a = shift(shift(cx, 2, 1), 1, 3)
    b = shift(cx, 3, 4)
    assert a.gens == b.gens and a.diff == b.diff


@pytest.mark.parametrize("seed", range(4))
def test_homology_does_not_depend_on_crossing_order(seed):
    d = parse_pd("X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]")
    order = list(range(d.n))
    random.Random(seed).shuffle(order)
    assert homology(build_unnormalized(d, order)).groups == homology(build_unnormalized(d)).groups


def test_limit():
    with pytest.raises(TooManyCrossings):
        build_unnormalized(TREFOIL, max_crossings=2)


@pytest.mark.parametrize("e", [e for e in entries() if 0 < e.diagram.n <= 6], ids=lambda e: e.id)
def test_block_identity(e):
    d = e.diagram
    dec = decompose(d, d.n - 1)
    assert dec.block_identity_holds()
    for c1_dim, incl, full, proj, c0_dim in dec.sequence_ranks().values():
        assert incl == c1_dim and proj == c0_dim and full == incl + proj


def test_decompose_requires_last_crossing():
    with pytest.raises(OrderingViolation):
        decompose(TREFOIL, 0, order=[0, 1, 2])
    with pytest.raises(UnknownCrossing):
        decompose(TREFOIL, 7)


def test_kinked_unknot_decomposition_is_tiny():
    d = add_kink(parse_pd("UNKNOT"))
    dec = decompose(d, 0)
    assert dec.d0.n == 0 and dec.d1.n == 0
    assert dec.c0.total_dim + dec.c1.total_dim == dec.full.total_dim == 6
