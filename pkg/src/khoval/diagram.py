"""Link diagrams given as planar-diagram (PD) codes.

A crossing is a 4-tuple of arc labels listed counterclockwise, starting at the
incoming under-strand.  Slots 0 and 2 carry the under-strand, slots 1 and 3
the over-strand.  Crossingless unknotted circles are kept as a separate count
(``loops``) so that resolving every crossing still yields a diagram.

Corners are pairs ``(k, p)`` naming the region between slot ``p`` and slot
``p + 1`` of crossing ``k``.  The 0-resolution of a crossing joins slots 0-1 and
2-3; it keeps corners ``(k, 0)`` and ``(k, 2)`` apart and opens a channel
between ``(k, 1)`` and ``(k, 3)``.  The coloring with corners ``(k, 0)`` and
``(k, 2)`` black at every crossing is called pattern A throughout the package.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from khoval.errors import (
    ArcArity,
    DisconnectedDiagram,
    EmptyDiagram,
    MalformedInput,
    NonPlanar,
    UnknownCrossing,
)

Crossing = tuple[int, int, int, int]
Corner = tuple[int, int]

# slot pairs joined by each resolution
RESOLUTION_PAIRS = {0: ((0, 1), (2, 3)), 1: ((0, 3), (1, 2))}


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[Crossing, ...]
    loops: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "crossings", tuple(tuple(int(a) for a in x) for x in self.crossings))
        if any(len(x) != 4 for x in self.crossings):
            raise MalformedInput("every crossing needs exactly four arcs")
        if self.loops < 0:
            raise MalformedInput("negative loop count")
        counts: dict[int, int] = {}
        for x in self.crossings:
            for a in x:
                counts[a] = counts.get(a, 0) + 1
        bad = sorted(a for a, c in counts.items() if c != 2)
        if bad:
            raise ArcArity(f"arcs not used exactly twice: {bad}")

    # -- basic structure ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.crossings)

    @cached_property
    def arcs(self) -> tuple[int, ...]:
        return tuple(sorted({a for x in self.crossings for a in x}))

    @cached_property
    def ends(self) -> dict[int, tuple[Corner, Corner]]:
        found: dict[int, list[Corner]] = {}
        for k, x in enumerate(self.crossings):
            for s, a in enumerate(x):
                found.setdefault(a, []).append((k, s))
        return {a: (e[0], e[1]) for a, e in found.items()}

    def other_end(self, k: int, s: int) -> Corner:
        e0, e1 = self.ends[self.crossings[k][s]]
        return e1 if e0 == (k, s) else e0

    @cached_property
    def strands(self) -> tuple[tuple[int, ...], ...]:
        """Components with crossings, as arc labels in traversal order."""
        return tuple(arcs for arcs, _ in _directed_components(self.crossings, self.ends))

    @cached_property
    def components(self) -> int:
        return len(self.strands) + self.loops

    @cached_property
    def signs(self) -> tuple[int, ...]:
        signs = [0] * self.n
        for _, heads in _directed_components(self.crossings, self.ends):
            for k, s in heads:
                if s == 3:
                    signs[k] = 1
                elif s == 1:
                    signs[k] = -1
        return tuple(signs)

    @property
    def x(self) -> int:
        """Number of negative crossings."""
        return sum(1 for s in self.signs if s < 0)

    @property
    def y(self) -> int:
        """Number of positive crossings."""
        return sum(1 for s in self.signs if s > 0)

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def __str__(self) -> str:
        return emit_pd(self)


def _walk_components(crossings, ends):
    """Yield ``(arcs, heads)`` per component; heads are the entry corners."""
    seen: set[int] = set()
    for start in sorted(ends):
        if start in seen:
            continue
        arcs: list[int] = []
        heads: list[Corner] = []
        label, head = start, ends[start][0]
        while True:
            seen.add(label)
            arcs.append(label)
            heads.append(head)
            k, s = head
            nslot = (s + 2) % 4
            label = crossings[k][nslot]
            e0, e1 = ends[label]
            head = e1 if e0 == (k, nslot) else e0
            if label == start and head == heads[0]:
                break
        yield tuple(arcs), tuple(heads)


def _wants_reverse(arcs, heads) -> bool:
    unders = sorted((k, s) for k, s in heads if s % 2 == 0)
    if unders:
        return unders[0][1] == 2
    return len(arcs) > 2 and arcs[-1] < arcs[1]


def _directed_components(crossings, ends):
    """Like :func:`_walk_components` but in the diagram's orientation."""
    for arcs, heads in _walk_components(crossings, ends):
        if not _wants_reverse(arcs, heads):
            yield arcs, heads
            continue
        tails = []
        for a, h in zip(arcs, heads):
            e0, e1 = ends[a]
            tails.append(e1 if e0 == h else e0)
        yield arcs[:1] + arcs[:0:-1], tails[:1] + tails[:0:-1]


def orient(crossings, loops: int = 0, *, strict: bool = False) -> LinkDiagram:
    """Rotate under-strand tuples so every component is traversed consistently.

    A component that passes under somewhere keeps the direction of its
    under-passage at the lowest-indexed crossing.  A component that only passes
    over is walked from its smallest arc toward the smaller neighbouring label.
    With ``strict`` any needed rotation is an error: the input then claimed two
    incompatible directions for one component.
    """
    d = LinkDiagram(tuple(crossings), loops)
    rotate: set[int] = set()
    for arcs, heads in _walk_components(d.crossings, d.ends):
        flip = _wants_reverse(arcs, heads)
        for k, s in heads:
            if s % 2 == 0 and ((s == 2) != flip):
                rotate.add(k)
    if rotate and strict:
        raise MalformedInput(
            f"under-strand directions inconsistent along a component at crossings {sorted(rotate)}"
        )
    new = tuple((x[2], x[3], x[0], x[1]) if k in rotate else x for k, x in enumerate(d.crossings))
    return LinkDiagram(new, loops)


def relabel_dense(crossings) -> tuple[Crossing, ...]:
    labels = sorted({a for x in crossings for a in x})
    index = {a: i + 1 for i, a in enumerate(labels)}
    return tuple(tuple(index[a] for a in x) for x in crossings)


# -- text and JSON forms ----------------------------------------------------

_TOKEN = re.compile(r"X\[([^\]]*)\]|UNKNOT|O")


def parse_pd(text: str) -> LinkDiagram:
    """Parse ``X[a,b,c,d],...`` text (optionally wrapped in ``PD[...]``),
    ``UNKNOT`` / ``O`` loop tokens, or the JSON form ``{"pd": [...]}``."""
    body = text.strip()
    if not body:
        raise EmptyDiagram("no crossings and no loops")
    if body.startswith("{"):
        try:
            obj = json.loads(body)
            raw = [tuple(x) for x in obj["pd"]]
            loops = int(obj.get("loops", 0))
        except (ValueError, KeyError, TypeError) as exc:
            raise MalformedInput(f"bad JSON diagram: {exc}") from exc
        if any(len(x) != 4 or not all(isinstance(a, int) for a in x) for x in raw):
            raise MalformedInput("JSON crossings must be lists of four integers")
    else:
        if body.startswith("PD[") and body.endswith("]"):
            body = body[3:-1]
        raw, loops = [], 0
        pos = 0
        compact = re.sub(r"\s+", "", body)
        while pos < len(compact):
            m = _TOKEN.match(compact, pos)
            if not m:
                raise MalformedInput(f"unexpected text at offset {pos}: {compact[pos:pos + 12]!r}")
            if m.group(0).startswith("X"):
                parts = m.group(1).split(",")
                if len(parts) != 4 or not all(re.fullmatch(r"-?\d+", p) for p in parts):
                    raise MalformedInput(f"crossing needs four integers: {m.group(0)}")
                raw.append(tuple(int(p) for p in parts))
            else:
                loops += 1
            pos = m.end()
            if pos < len(compact):
                if compact[pos] != ",":
                    raise MalformedInput(f"expected ',' at offset {pos}")
                pos += 1
                if pos == len(compact):
                    raise MalformedInput("trailing comma")
    if not raw and loops == 0:
        raise EmptyDiagram("no crossings and no loops")
    LinkDiagram(tuple(raw), loops)  # arity check before renumbering
    d = orient(relabel_dense(raw), loops, strict=True)
    for piece in connected_pieces(d):
        if piece.n and len(faces(piece).faces) != piece.n + 2:
            raise NonPlanar("face count does not match the Euler formula")
    return d


def emit_pd(d: LinkDiagram) -> str:
    if not d.crossings:
        return ",".join(["UNKNOT"] if d.loops == 1 else ["O"] * d.loops)
    parts = ["X[{},{},{},{}]".format(*x) for x in d.crossings]
    return ",".join(parts + ["O"] * d.loops)


def to_json(d: LinkDiagram) -> dict:
    obj: dict = {"pd": [list(x) for x in d.crossings]}
    if d.loops:
        obj["loops"] = d.loops
    return obj


# -- faces and coloring -----------------------------------------------------


@dataclass(frozen=True)
class FaceStructure:
    faces: tuple[tuple[Corner, ...], ...]
    corner_face: dict[Corner, int] = field(repr=False)
    arc_faces: dict[int, tuple[int, int]] = field(repr=False)

    @cached_property
    def adjacency(self) -> frozenset[tuple[int, int]]:
        return frozenset(tuple(sorted(p)) for p in self.arc_faces.values())

    def crossing_faces(self, k: int) -> tuple[int, int, int, int]:
        return tuple(self.corner_face[(k, p)] for p in range(4))


def faces(d: LinkDiagram) -> FaceStructure:
    """Regions of the sphere cut out by a connected diagram."""
    if not d.crossings:
        if d.loops != 1:
            raise DisconnectedDiagram("crossingless diagram with several circles")
        return FaceStructure(((), ()), {}, {})
    if not is_connected(d):
        raise DisconnectedDiagram("face tracing needs a connected diagram")
    corner_face: dict[Corner, int] = {}
    out: list[tuple[Corner, ...]] = []
    for k in range(d.n):
        for p in range(4):
            if (k, p) in corner_face:
                continue
            cycle: list[Corner] = []
            c = (k, p)
            while c not in corner_face:
                corner_face[c] = len(out)
                cycle.append(c)
                c = d.other_end(c[0], (c[1] + 1) % 4)
            if c != (k, p):
                raise NonPlanar("corner walk did not close up")
            out.append(tuple(cycle))
    arc_faces = {}
    for a, ((k, s), _) in d.ends.items():
        arc_faces[a] = (corner_face[(k, (s - 1) % 4)], corner_face[(k, s)])
    return FaceStructure(tuple(out), corner_face, arc_faces)


@dataclass(frozen=True)
class Coloring:
    black: tuple[bool, ...]
    patterns: tuple[str, ...]  # "A" or "B" per crossing

    @property
    def n_black(self) -> int:
        return sum(self.black)

    @property
    def n_white(self) -> int:
        return len(self.black) - self.n_black

    def reversed(self) -> "Coloring":
        flip = {"A": "B", "B": "A"}
        return Coloring(tuple(not b for b in self.black), tuple(flip[p] for p in self.patterns))


def checkerboard(d: LinkDiagram, fs: FaceStructure | None = None) -> Coloring:
    """Proper 2-coloring of the faces.

    The face holding corner ``(0, 0)`` is black, so crossing 0 shows pattern A.
    For alternating diagrams this makes pattern A appear at every crossing.
    The unknot gets its first face black.
    """
    fs = fs or faces(d)
    nf = len(fs.faces)
    nbrs: list[list[int]] = [[] for _ in range(nf)]
    for f, g in fs.arc_faces.values():
        nbrs[f].append(g)
        nbrs[g].append(f)
    if not d.crossings:
        nbrs = [[1], [0]]
    seed = fs.corner_face[(0, 0)] if d.crossings else 0
    color: list[bool | None] = [None] * nf
    color[seed] = True
    queue = deque([seed])
    while queue:
        f = queue.popleft()
        for g in nbrs[f]:
            if color[g] is None:
                color[g] = not color[f]
                queue.append(g)
            elif color[g] == color[f]:
                raise NonPlanar("face adjacency graph is not bipartite")
    black = tuple(bool(c) for c in color)
    patterns = tuple("A" if black[fs.corner_face[(k, 0)]] else "B" for k in range(d.n))
    return Coloring(black, patterns)


# -- predicates -------------------------------------------------------------


def is_connected(d: LinkDiagram) -> bool:
    """The diagram is one connected curve system: a single loop, or one
    4-valent piece with no loose loops."""
    if not d.crossings:
        return d.loops == 1
    if d.loops:
        return False
    seen = {0}
    stack = [0]
    while stack:
        k = stack.pop()
        for s in range(4):
            k2, _ = d.other_end(k, s)
            if k2 not in seen:
                seen.add(k2)
                stack.append(k2)
    return len(seen) == d.n


def connected_pieces(d: LinkDiagram) -> list[LinkDiagram]:
    """Split the crossings into connected sub-diagrams (loops dropped)."""
    left = set(range(d.n))
    pieces = []
    while left:
        start = min(left)
        comp = {start}
        stack = [start]
        while stack:
            k = stack.pop()
            for s in range(4):
                k2, _ = d.other_end(k, s)
                if k2 not in comp:
                    comp.add(k2)
                    stack.append(k2)
        left -= comp
        pieces.append(LinkDiagram(tuple(d.crossings[k] for k in sorted(comp))))
    return pieces


def is_split(d: LinkDiagram) -> bool:
    return len(connected_pieces(d)) + d.loops >= 2


def is_alternating(d: LinkDiagram) -> bool:
    """Every arc runs from an over-slot to an under-slot."""
    return all((e0[1] + e1[1]) % 2 == 1 for e0, e1 in d.ends.values())


def nugatory_crossings(d: LinkDiagram) -> list[int]:
    out = []
    for piece_offset, piece in _pieces_with_index(d):
        fs = faces(piece)
        for k in range(piece.n):
            f = fs.crossing_faces(k)
            if f[0] == f[2] or f[1] == f[3]:
                out.append(piece_offset[k])
    return sorted(out)


def _pieces_with_index(d: LinkDiagram):
    index = {x: [] for x in d.crossings}
    for k, x in enumerate(d.crossings):
        index[x].append(k)
    for piece in connected_pieces(d):
        yield [index[x].pop(0) for x in piece.crossings], piece


def is_reduced(d: LinkDiagram) -> bool:
    return not nugatory_crossings(d)


# -- transformations --------------------------------------------------------


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Switch every crossing; orientation is kept, so every sign flips."""
    new = []
    for (a, b, c, e), s in zip(d.crossings, d.signs):
        new.append((e, a, b, c) if s > 0 else (b, c, e, a))
    return LinkDiagram(tuple(new), d.loops)


def resolve_with_map(d: LinkDiagram, k: int, r: int):
    """Resolve crossing ``k``; also return where each old arc went.

    The map sends an old label to ``("arc", new_label)`` or, when the arc closed
    up into a crossingless circle, to ``("loop", index)`` with loop indices
    counted after the loops ``d`` already had.
    """
    if not 0 <= k < d.n:
        raise UnknownCrossing(f"no crossing {k} in a {d.n}-crossing diagram")
    if r not in (0, 1):
        raise ValueError("resolution must be 0 or 1")
    x = d.crossings[k]
    parent = {a: a for a in d.arcs}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for s, t in RESOLUTION_PAIRS[r]:
        ra, rb = find(x[s]), find(x[t])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    rest = [tuple(find(a) for a in y) for j, y in enumerate(d.crossings) if j != k]
    used = sorted({a for y in rest for a in y})
    dense = {a: i + 1 for i, a in enumerate(used)}
    closed = sorted({find(a) for a in d.arcs} - set(used))
    loop_index = {root: d.loops + i for i, root in enumerate(closed)}
    arc_map = {}
    for a in d.arcs:
        root = find(a)
        arc_map[a] = ("arc", dense[root]) if root in dense else ("loop", loop_index[root])
    new = orient(tuple(tuple(dense[a] for a in y) for y in rest), d.loops + len(closed))
    return new, arc_map


def resolve_at(d: LinkDiagram, k: int, r: int) -> LinkDiagram:
    return resolve_with_map(d, k, r)[0]


def canonical_key(d: LinkDiagram) -> tuple:
    """Relabelling-invariant key of the unoriented diagram (planar isomorphism
    preserving the sphere's orientation)."""
    if not d.crossings:
        return ((), d.loops)
    best = None
    for start in range(d.n):
        for rot0 in (0, 2):
            rot = {start: rot0}
            order = [start]
            queue = deque([start])
            while queue:
                k = queue.popleft()
                for i in range(4):
                    k2, s2 = d.other_end(k, (rot[k] + i) % 4)
                    if k2 not in rot:
                        rot[k2] = s2 - (s2 % 2)
                        order.append(k2)
                        queue.append(k2)
            if len(order) != d.n:
                raise DisconnectedDiagram("canonical_key needs a connected diagram")
            labels: dict[int, int] = {}
            code = []
            for k in order:
                row = []
                for i in range(4):
                    a = d.crossings[k][(rot[k] + i) % 4]
                    labels.setdefault(a, len(labels) + 1)
                    row.append(labels[a])
                code.append(tuple(row))
            key = tuple(code)
            if best is None or key < best:
                best = key
    return (best, d.loops)


# -- builders used by the corpus ---------------------------------------------


def _head_tail(d: LinkDiagram, arc: int) -> tuple[Corner, Corner]:
    """(tail, head) corners of ``arc`` under the diagram's orientation."""
    for arcs, heads in _directed_components(d.crossings, d.ends):
        if arc in arcs:
            head = heads[arcs.index(arc)]
            e0, e1 = d.ends[arc]
            return (e1 if e0 == head else e0), head
    raise KeyError(arc)


def _replace_slot(crossings: list[list[int]], corner: Corner, label: int) -> None:
    crossings[corner[0]][corner[1]] = label


def clasp_sum(d: LinkDiagram, arc: int | None = None) -> LinkDiagram:
    """Connected sum with the two-crossing clasp: a small circle hooked around
    ``arc`` (default: the smallest arc), keeping alternation.

    The two clasp crossings are the last two crossings of the result.
    """
    if not d.crossings:
        if d.loops != 1:
            raise DisconnectedDiagram("clasp_sum needs a connected diagram")
        # Hopf link: strand e (x2 -> x1), m (x1 -> x2); circle f_bot, f_top
        e, m, fb, ft = 1, 2, 3, 4
        return orient(((ft, e, fb, m), (m, fb, e, ft)))
    arc = min(d.arcs) if arc is None else arc
    tail, head = _head_tail(d, arc)
    top = max(d.arcs)
    m, e2, fb, ft = top + 1, top + 2, top + 3, top + 4
    cr = [list(x) for x in d.crossings]
    _replace_slot(cr, head, e2)
    if tail[1] % 2 == 0:  # left its tail as under: over at x1, under at x2
        cr.append([ft, arc, fb, m])
        cr.append([m, fb, e2, ft])
    else:
        cr.append([arc, fb, m, ft])
        cr.append([fb, e2, ft, m])
    return orient(relabel_dense(tuple(tuple(x) for x in cr)), d.loops)


def add_kink(d: LinkDiagram, arc: int | None = None, positive: bool = True) -> LinkDiagram:
    """Insert a Reidemeister-I curl on ``arc``, entered along the under-strand."""
    if not d.crossings:
        return LinkDiagram(((1, 1, 2, 2),) if positive else ((1, 2, 2, 1),), d.loops - 1)
    arc = min(d.arcs) if arc is None else arc
    _, head = _head_tail(d, arc)
    top = max(d.arcs)
    e2, f = top + 1, top + 2
    cr = [list(x) for x in d.crossings]
    _replace_slot(cr, head, e2)
    cr.append([arc, e2, f, f] if positive else [arc, f, f, e2])
    return orient(relabel_dense(tuple(tuple(x) for x in cr)), d.loops)


def disjoint_union(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    shift = max(d1.arcs, default=0)
    cr = d1.crossings + tuple(tuple(a + shift for a in x) for x in d2.crossings)
    return LinkDiagram(cr, d1.loops + d2.loops)
