from __future__ import annotations

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from khoval.snf import invariant_factors, matmul, rank_mod_p, smith_normal_form, sparse_from_dense
from oracles import determinantal_factors


def test_diagonal_pair():
    assert smith_normal_form([[2, 0], [0, 3]])[0] == [1, 6]


def test_identity():
    assert smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]])[0] == [1, 1, 1]


def test_single_entry():
    assert smith_normal_form([[2]])[0] == [2]


def test_zero_and_empty():
    assert smith_normal_form([[0, 0], [0, 0]])[0] == []
    assert smith_normal_form([])[0] == []
    assert invariant_factors({}) == []


def test_big_entries_do_not_overflow():
    big = 2**80 + 1
    facs = smith_normal_form([[big, 0], [0, big * 3]])[0]
    assert facs == [big, 3 * big]


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_factors_match_determinantal_divisors(m):
    facs, u, v = smith_normal_form(m)
    assert facs == determinantal_factors(m)
    assert all(b % a == 0 for a, b in zip(facs, facs[1:]))
    diag = matmul(matmul(u, m), v)
    for i, row in enumerate(diag):
        for j, x in enumerate(row):
            assert x == (facs[i] if i == j and i < len(facs) else 0)
    assert abs(sympy.Matrix(u).det()) == 1
    assert abs(sympy.Matrix(v).det()) == 1


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_sparse_route_agrees_with_dense(m):
    assert invariant_factors(sparse_from_dense(m)) == smith_normal_form(m)[0]


@settings(max_examples=100, deadline=None)
@given(matrices, st.sampled_from([2, 3, 5]))
def test_rank_mod_p_counts_units_mod_p(m, p):
    assert rank_mod_p(sparse_from_dense(m), p) == _rank_mod(m, p)


def _rank_mod(m, p):
    # rank over GF(p): the number of invariant factors not divisible by p
    return sum(1 for f in determinantal_factors(m) if f % p)
