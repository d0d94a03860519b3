"""Cube of resolutions: circle partitions of all 2^c smoothings."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from khoval.diagram import RESOLUTION_PAIRS, LinkDiagram
from khoval.errors import TooManyCrossings, UnknownCrossing

DEFAULT_MAX_CROSSINGS = 16


@dataclass(frozen=True)
class ResolutionState:
    """Crossings in ``subset`` get the 1-resolution, the rest the 0-resolution.

    ``circle_of[a - 1]`` is the circle holding arc ``a``; circles are numbered by
    their smallest arc, and the diagram's crossingless loops come last.
    """

    subset: frozenset[int]
    mask: int
    circle_of: tuple[int, ...]
    k: int


def _circle_partition(d: LinkDiagram, subset) -> tuple[tuple[int, ...], int]:
    m = 2 * d.n
    parent = list(range(m))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for k, x in enumerate(d.crossings):
        for s, t in RESOLUTION_PAIRS[1 if k in subset else 0]:
            ra, rb = find(x[s] - 1), find(x[t] - 1)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    index: dict[int, int] = {}
    circle_of = []
    for a in range(m):
        r = find(a)
        if r not in index:
            index[r] = len(index)
        circle_of.append(index[r])
    return tuple(circle_of), len(index) + d.loops


def circles(d: LinkDiagram, subset=(), order: Sequence[int] | None = None) -> ResolutionState:
    order = list(range(d.n)) if order is None else list(order)
    subset = frozenset(subset)
    if not subset <= set(range(d.n)):
        raise UnknownCrossing(f"subset {sorted(subset)} not within crossings of the diagram")
    mask = sum(1 << i for i, k in enumerate(order) if k in subset)
    circle_of, k = _circle_partition(d, subset)
    return ResolutionState(subset, mask, circle_of, k)


def o(d: LinkDiagram) -> int:
    """Circle count of the all-0 resolution."""
    return circles(d).k


def cube(
    d: LinkDiagram,
    order: Sequence[int] | None = None,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
) -> list[ResolutionState]:
    """All resolutions, indexed by bitmask over ``order`` (bit i is ``order[i]``)."""
    if d.n > max_crossings:
        raise TooManyCrossings(f"{d.n} crossings exceeds the limit of {max_crossings}")
    order = list(range(d.n)) if order is None else list(order)
    if sorted(order) != list(range(d.n)):
        raise UnknownCrossing("order must be a permutation of the crossings")
    states = []
    for mask in range(1 << d.n):
        subset = frozenset(order[i] for i in range(d.n) if mask >> i & 1)
        circle_of, k = _circle_partition(d, subset)
        states.append(ResolutionState(subset, mask, circle_of, k))
    return states


def cube_edges(n: int):
    """Yield ``(mask, i, mask | 1 << i)`` for every edge of the n-cube."""
    for mask in range(1 << n):
        for i in range(n):
            if not mask >> i & 1:
                yield mask, i, mask | 1 << i


def dump_cube(d: LinkDiagram, order: Sequence[int] | None = None, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> str:
    states = cube(d, order, max_crossings)
    rows = [
        {"mask": s.mask, "subset": sorted(s.subset), "circles": s.k, "circle_of": list(s.circle_of)}
        for s in states
    ]
    return json.dumps({"crossings": d.n, "loops": d.loops, "states": rows}, indent=1)
