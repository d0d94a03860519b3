"""The unnormalized Khovanov complex over the integers.

Generators are enhanced states ``(mask, labels)``: ``mask`` selects the
1-resolved crossings (bit i is ``order[i]``) and bit c of ``labels`` is set
when circle c carries ``x`` rather than ``1``.  A generator sits at
``i = |mask|`` and ``j = #1 - #x + i``.

Shifts follow ``[k]{l}: (i, j) -> (i - k, j - l)``; an odd homological shift
negates the differential.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from khoval.cube import DEFAULT_MAX_CROSSINGS, cube
from khoval.diagram import LinkDiagram, resolve_with_map
from khoval.errors import NotAComplex, OrderingViolation, RepresentativeMismatch, UnknownCrossing
from khoval.snf import SparseCols

Bidegree = tuple[int, int]


@dataclass(frozen=True)
class ChainComplex:
    """Bigraded free complex.

    ``diff[(i, j)]`` maps the generators at ``(i, j)`` to those at ``(i + 1, j)``
    as a column-major sparse matrix (column = source index, row = target index).
    """

    gens: dict[Bidegree, tuple]
    diff: dict[Bidegree, SparseCols]
    offset: tuple[int, int] = (0, 0)  # accumulated [k]{l}

    def dim(self, bd: Bidegree) -> int:
        return len(self.gens.get(bd, ()))

    @property
    def total_dim(self) -> int:
        return sum(len(g) for g in self.gens.values())

    def bidegrees(self) -> list[Bidegree]:
        return sorted(self.gens)

    def check_d_squared(self) -> None:
        for (i, j), first in self.diff.items():
            second = self.diff.get((i + 1, j))
            if not second:
                continue
            for col, entries in first.items():
                acc: dict[int, int] = {}
                for mid, x in entries.items():
                    for row, y in second.get(mid, {}).items():
                        acc[row] = acc.get(row, 0) + x * y
                if any(acc.values()):
                    raise NotAComplex(f"d∘d != 0 starting at bidegree {(i, j)}")

    def summary(self) -> dict:
        """Generator counts and differential shapes per bidegree."""
        rows = []
        for i, j in self.bidegrees():
            rows.append(
                {
                    "i": i,
                    "j": j,
                    "generators": self.dim((i, j)),
                    "differential": [self.dim((i + 1, j)), self.dim((i, j))],
                    "nonzeros": sum(len(c) for c in self.diff.get((i, j), {}).values()),
                }
            )
        return {"offset": list(self.offset), "bidegrees": rows}


def _popcount(x: int) -> int:
    return bin(x).count("1")


def build_unnormalized(
    d: LinkDiagram,
    order: Sequence[int] | None = None,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
    check: bool = False,
) -> ChainComplex:
    """Cube-of-resolutions complex with merge/split edge maps.

    The edge that adds ``order[i]`` to a state S carries the sign
    ``(-1)^(number of elements of S before it in the order)``.
    """
    order = list(range(d.n)) if order is None else list(order)
    states = cube(d, order, max_crossings)
    gens: dict[Bidegree, list] = {}
    index: dict[tuple[int, int], int] = {}
    for st in states:
        i = _popcount(st.mask)
        for lab in range(1 << st.k):
            j = st.k - 2 * _popcount(lab) + i
            bucket = gens.setdefault((i, j), [])
            index[(st.mask, lab)] = len(bucket)
            bucket.append((st.mask, lab))

    diff: dict[Bidegree, SparseCols] = {}
    narcs = 2 * d.n
    for st in states:
        s_arc = st.k - d.loops  # circles made of arcs; loops follow
        reps = [0] * s_arc
        seen = set()
        for a in range(narcs):
            c = st.circle_of[a]
            if c not in seen:
                seen.add(c)
                reps[c] = a
        i = _popcount(st.mask)
        for bit, a in enumerate(order):
            if st.mask >> bit & 1:
                continue
            tgt = states[st.mask | 1 << bit]
            t_arc = tgt.k - d.loops
            sign = -1 if _popcount(st.mask & ((1 << bit) - 1)) % 2 else 1
            x = d.crossings[a]
            ca, cb = st.circle_of[x[0] - 1], st.circle_of[x[2] - 1]
            passive = []  # (source circle, target circle)
            for c in range(s_arc):
                if c not in (ca, cb):
                    passive.append((c, tgt.circle_of[reps[c]]))
            for t in range(d.loops):
                passive.append((s_arc + t, t_arc + t))
            merge = ca != cb
            if merge:
                cm = tgt.circle_of[x[0] - 1]
            else:
                t1, t2 = tgt.circle_of[x[0] - 1], tgt.circle_of[x[1] - 1]
            for lab in range(1 << st.k):
                base = 0
                for c, tc in passive:
                    if lab >> c & 1:
                        base |= 1 << tc
                outs = []
                if merge:
                    la, lb = lab >> ca & 1, lab >> cb & 1
                    if la and lb:
                        continue
                    outs.append(base | (la | lb) << cm)
                elif lab >> ca & 1:
                    outs.append(base | 1 << t1 | 1 << t2)
                else:
                    outs.append(base | 1 << t2)
                    outs.append(base | 1 << t1)
                j = st.k - 2 * _popcount(lab) + i
                col = diff.setdefault((i, j), {}).setdefault(index[(st.mask, lab)], {})
                for out in outs:
                    row = index[(tgt.mask, out)]
                    val = col.get(row, 0) + sign
                    if val:
                        col[row] = val
                    else:
                        col.pop(row)
    cx = ChainComplex({bd: tuple(g) for bd, g in gens.items()}, diff)
    if check:
        cx.check_d_squared()
    return cx


def shift(cx: ChainComplex, k: int, l: int) -> ChainComplex:
    """``cx[k]{l}``: move ``(i, j)`` to ``(i - k, j - l)``."""
    if k == 0 and l == 0:
        return cx
    s = -1 if k % 2 else 1
    gens = {(i - k, j - l): g for (i, j), g in cx.gens.items()}
    diff = {
        (i - k, j - l): {c: {r: s * x for r, x in e.items()} for c, e in m.items()}
        for (i, j), m in cx.diff.items()
    }
    return ChainComplex(gens, diff, (cx.offset[0] + k, cx.offset[1] + l))


def normalize(cx: ChainComplex, d: LinkDiagram) -> ChainComplex:
    """``C(D) = C̄(D)[x]{2x - y}`` with x, y the negative and positive crossing counts."""
    return shift(cx, d.x, 2 * d.x - d.y)


# -- skein decomposition ------------------------------------------------------


@dataclass(frozen=True)
class SkeinDecomposition:
    """``C̄(D) = C̄(D(*0)) ⊕ C̄(D(*1))[-1]{-1}`` for the last crossing ``a``.

    ``to_block[(i, j)][n]`` says where generator n of ``full`` at ``(i, j)`` lives:
    ``(0, m)`` for generator m of ``c0`` or ``(1, m)`` for generator m of ``c1``,
    both at the same bidegree.
    """

    crossing: int
    d0: LinkDiagram
    d1: LinkDiagram
    full: ChainComplex
    c0: ChainComplex
    c1: ChainComplex
    xi: dict[Bidegree, SparseCols]
    to_block: dict[Bidegree, tuple[tuple[int, int], ...]] = field(repr=False)

    def block_identity_holds(self) -> bool:
        """Check ``d(z, w) = (d0 z, xi z - d1 w)`` entry by entry."""
        for bd, blocks in self.to_block.items():
            tgt_blocks = self.to_block.get((bd[0] + 1, bd[1]), ())
            full_m = self.full.diff.get(bd, {})
            for n, (blk, m) in enumerate(blocks):
                got: dict[tuple[int, int], int] = {}
                for row, v in full_m.get(n, {}).items():
                    got[tgt_blocks[row]] = v
                want: dict[tuple[int, int], int] = {}
                if blk == 0:
                    for row, v in self.c0.diff.get(bd, {}).get(m, {}).items():
                        want[(0, row)] = v
                    for row, v in self.xi.get(bd, {}).get(m, {}).items():
                        want[(1, row)] = v
                else:
                    for row, v in self.c1.diff.get(bd, {}).get(m, {}).items():
                        want[(1, row)] = -v
                if got != want:
                    return False
        return True

    def sequence_ranks(self) -> dict[Bidegree, tuple[int, int, int, int, int]]:
        """Per bidegree ``(dim c1, rank incl, dim full, rank proj, dim c0)``.

        Exactness of ``0 -> c1 -> full -> c0 -> 0`` means
        ``rank incl = dim c1``, ``rank proj = dim c0`` and
        ``dim full - rank proj = rank incl``.
        """
        out = {}
        for bd, blocks in self.to_block.items():
            incl = {m for blk, m in blocks if blk == 1}
            proj = {m for blk, m in blocks if blk == 0}
            out[bd] = (self.c1.dim(bd), len(incl), len(blocks), len(proj), self.c0.dim(bd))
        return out


def _circle_image(state, st_res, arc_map, d: LinkDiagram, dres: LinkDiagram) -> list[int]:
    """Circle of the resolved diagram matching each circle of ``d``'s state."""
    s_arc = state.k - d.loops
    r_arc = st_res.k - dres.loops
    image = [None] * state.k
    for a in range(2 * d.n):
        c = state.circle_of[a]
        if image[c] is not None:
            continue
        kind, val = arc_map[a + 1]
        image[c] = st_res.circle_of[val - 1] if kind == "arc" else r_arc + val
    for t in range(d.loops):
        image[s_arc + t] = r_arc + t
    return image


def decompose(
    d: LinkDiagram,
    a: int,
    order: Sequence[int] | None = None,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
) -> SkeinDecomposition:
    if not 0 <= a < d.n:
        raise UnknownCrossing(f"no crossing {a}")
    if order is None:
        order = [k for k in range(d.n) if k != a] + [a]
    order = list(order)
    if order[-1] != a:
        raise OrderingViolation(f"crossing {a} must come last in the ordering")
    full = build_unnormalized(d, order, max_crossings)
    d0, map0 = resolve_with_map(d, a, 0)
    d1, map1 = resolve_with_map(d, a, 1)
    rest = [k if k < a else k - 1 for k in order[:-1]]
    c0 = build_unnormalized(d0, rest, max_crossings)
    c1 = shift(build_unnormalized(d1, rest, max_crossings), -1, -1)
    states = cube(d, order, max_crossings)
    st0 = cube(d0, rest, max_crossings)
    st1 = cube(d1, rest, max_crossings)
    top = 1 << (d.n - 1)
    idx0 = {g: n for g_list in c0.gens.values() for n, g in enumerate(g_list)}
    idx1 = {g: n for g_list in c1.gens.values() for n, g in enumerate(g_list)}
    images = {}
    for st in states:
        low = st.mask & (top - 1)
        if st.mask & top:
            images[st.mask] = (1, low, _circle_image(st, st1[low], map1, d, d1))
        else:
            images[st.mask] = (0, low, _circle_image(st, st0[low], map0, d, d0))
        if len(set(images[st.mask][2])) != st.k:
            raise RepresentativeMismatch("circle correspondence is not a bijection")
    to_block: dict[Bidegree, tuple] = {}
    for bd, glist in full.gens.items():
        out = []
        for mask, lab in glist:
            blk, low, image = images[mask]
            lab2 = 0
            for c, tc in enumerate(image):
                if lab >> c & 1:
                    lab2 |= 1 << tc
            key = (low, lab2)
            out.append((blk, (idx0 if blk == 0 else idx1)[key]))
        to_block[bd] = tuple(out)
    xi: dict[Bidegree, SparseCols] = {}
    for bd, m in full.diff.items():
        src = to_block[bd]
        tgt = to_block.get((bd[0] + 1, bd[1]), ())
        for n, entries in m.items():
            if src[n][0] != 0:
                continue
            for row, v in entries.items():
                if tgt[row][0] == 1:
                    xi.setdefault(bd, {}).setdefault(src[n][1], {})[tgt[row][1]] = v
    return SkeinDecomposition(a, d0, d1, full, c0, c1, xi, to_block)


def dump_summary(cx: ChainComplex) -> str:
    return json.dumps(cx.summary(), indent=1)
