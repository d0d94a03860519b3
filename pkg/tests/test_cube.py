from __future__ import annotations

import json

import pytest

from khoval.cube import circles, cube, cube_edges, dump_cube, o
from khoval.diagram import is_alternating, is_connected, mirror, parse_pd
from khoval.errors import TooManyCrossings, UnknownCrossing
from oracles import count_loops, entries

TREFOIL = parse_pd("X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]")


def test_unknot_has_one_state_with_one_circle():
    states = cube(parse_pd("UNKNOT"))
    assert len(states) == 1 and states[0].k == 1


@pytest.mark.parametrize("e", [e for e in entries() if e.diagram.n <= 6], ids=lambda e: e.id)
def test_circle_counts_match_independent_walk(e):
    d = e.diagram
    for st in cube(d):
        assert st.k == count_loops(d, st.subset)


def test_trefoil_circle_counts():
    # all-0 gives 2 circles, all-1 gives 3; the 8 states have sum 2^k = 36 generators
    states = cube(TREFOIL)
    assert states[0].k == 2 and states[-1].k == 3
    assert sum(2 ** s.k for s in states) == sum(2 ** count_loops(TREFOIL, s.subset) for s in states)


def test_mask_follows_order():
    order = [2, 0, 1]
    states = cube(TREFOIL, order)
    for s in states:
        assert s.subset == frozenset(order[i] for i in range(3) if s.mask >> i & 1)
    st = circles(TREFOIL, {2}, order)
    assert st.mask == 1


def test_region_identity_on_alternating_corpus():
    for e in entries():
        d = e.diagram
        if is_connected(d) and is_alternating(d):
            assert o(d) + o(mirror(d)) == d.n + 2, e.id


def test_limits_and_bad_input():
    with pytest.raises(TooManyCrossings):
        cube(TREFOIL, max_crossings=2)
    with pytest.raises(UnknownCrossing):
        cube(TREFOIL, order=[0, 1, 1])
    with pytest.raises(UnknownCrossing):
        circles(TREFOIL, {5})


def test_cube_edges_count():
    assert len(list(cube_edges(4))) == 4 * 2 ** 3


def test_dump_cube_is_json():
    obj = json.loads(dump_cube(TREFOIL))
    assert obj["crossings"] == 3 and len(obj["states"]) == 8
