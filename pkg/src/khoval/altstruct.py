"""Black-disk graphs of alternating diagrams and the Case I/II/III trichotomy.

Vertices are the black faces of the pattern-A coloring; these are exactly the
disks bounded by the circles of the all-0 resolution.  Each crossing joins
the two black faces at its corners ``(k, 0)`` and ``(k, 2)``.  Faces live on
the sphere, so the unbounded region needs no special treatment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from khoval.diagram import (
    LinkDiagram,
    checkerboard,
    emit_pd,
    faces,
    is_alternating,
    is_reduced,
    is_split,
    mirror,
    orient,
)
from khoval.errors import ClassificationFailure, InvalidWitness, PreconditionViolated


@dataclass(frozen=True)
class BlackDiskGraph:
    vertices: tuple[int, ...]  # face indices
    edges: tuple[tuple[int, int, int], ...]  # (crossing, vertex u, vertex v)
    boundary: tuple[tuple[int, ...], ...]  # crossings around each vertex, cyclic order

    def multiplicity(self) -> dict[tuple[int, int], list[int]]:
        pairs: dict[tuple[int, int], list[int]] = {}
        for k, u, v in self.edges:
            pairs.setdefault((min(u, v), max(u, v)), []).append(k)
        return pairs

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        nbrs = {v: set() for v in range(len(self.vertices))}
        for _, u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        seen, stack = {0}, [0]
        while stack:
            for w in nbrs[stack.pop()] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == len(self.vertices)

    def has_self_loops(self) -> bool:
        return any(u == v for _, u, v in self.edges)


def _require(d: LinkDiagram, *, reduced: bool = True) -> None:
    if not is_alternating(d):
        raise PreconditionViolated("alternating")
    if is_split(d):
        raise PreconditionViolated("non-split")
    if reduced and not is_reduced(d):
        raise PreconditionViolated("reduced")


def disk_graph(d: LinkDiagram) -> BlackDiskGraph:
    """Black-disk graph without precondition checks (self-loops possible)."""
    fs = faces(d)
    col = checkerboard(d, fs)
    verts = tuple(f for f, b in enumerate(col.black) if b)
    vidx = {f: i for i, f in enumerate(verts)}
    edges = []
    for k in range(d.n):
        f0, f2 = fs.corner_face[(k, 0)], fs.corner_face[(k, 2)]
        if not (col.black[f0] and col.black[f2]):
            raise PreconditionViolated("alternating", "crossing without pattern A")
        edges.append((k, vidx[f0], vidx[f2]))
    boundary = tuple(tuple(k for k, _ in fs.faces[f]) for f in verts)
    return BlackDiskGraph(verts, tuple(edges), boundary)


def black_disk_graph(d: LinkDiagram) -> BlackDiskGraph:
    _require(d)
    return disk_graph(d)


@dataclass(frozen=True)
class MarkedTree:
    """Tree on black disks whose edges are pairs joined by two crossings.

    ``marked`` holds ``(vertex, edge index)`` for every marked end: the two
    crossings of the edge are consecutive around that vertex.
    """

    n_vertices: int
    edges: tuple[tuple[int, int, tuple[int, int]], ...]
    marked: frozenset[tuple[int, int]]

    def degree(self, v: int) -> int:
        return sum(1 for a, b, _ in self.edges if v in (a, b))

    def pendent_edges(self) -> list[int]:
        return [e for e, (a, b, _) in enumerate(self.edges) if self.degree(a) == 1 or self.degree(b) == 1]


def _consecutive(cycle: tuple[int, ...], x: int, y: int) -> bool:
    n = len(cycle)
    px, py = cycle.index(x), cycle.index(y)
    return (px - py) % n in (1, n - 1)


def marked_tree(g: BlackDiskGraph) -> MarkedTree:
    pairs = g.multiplicity()
    nv = len(g.vertices)
    if len(pairs) != nv - 1 or any(len(ks) != 2 for ks in pairs.values()) or not g.is_connected():
        raise ClassificationFailure("black-disk pairs do not form a tree of doubled edges")
    edges = []
    marked = set()
    for e, ((u, v), ks) in enumerate(sorted(pairs.items())):
        x, y = sorted(ks)
        edges.append((u, v, (x, y)))
        for w in (u, v):
            if _consecutive(g.boundary[w], x, y):
                marked.add((w, e))
    return MarkedTree(nv, tuple(edges), frozenset(marked))


@dataclass(frozen=True)
class CaseResult:
    tag: str  # "I", "II" or "III"
    crossing: int | None = None  # witness for I and II
    clasp: tuple[int, int] | None = None  # witness for III
    pendent: int | None = None  # black disk (face index) of the pendent vertex
    partner: int | None = None
    dprime: LinkDiagram | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        out: dict = {"case": self.tag}
        if self.crossing is not None:
            out["crossing"] = self.crossing
        if self.clasp is not None:
            out["clasp"] = list(self.clasp)
            out["pendent_disk"] = self.pendent
            out["partner_disk"] = self.partner
        if self.dprime is not None:
            out["dprime"] = emit_pd(self.dprime)
            out["dprime_crossings"] = self.dprime.n
        return out


def _single_crossing_pair(g: BlackDiskGraph) -> int | None:
    singles = [ks[0] for ks in g.multiplicity().values() if len(ks) == 1]
    return min(singles) if singles else None


def classify_case(d: LinkDiagram) -> CaseResult:
    _require(d)
    if d.n == 0:
        raise PreconditionViolated("c(D) > 0")
    g = disk_graph(d)
    k = _single_crossing_pair(g)
    if k is not None:
        return CaseResult("I", crossing=k)
    k = _single_crossing_pair(disk_graph(mirror(d)))
    if k is not None:
        return CaseResult("II", crossing=k)
    tree = marked_tree(g)
    for e in sorted(tree.pendent_edges(), key=lambda e: tree.edges[e][2]):
        u, v, clasp = tree.edges[e]
        if (u, e) in tree.marked and (v, e) in tree.marked:
            pend, partner = (u, v) if tree.degree(u) == 1 else (v, u)
            dprime, _ = split_case3(d, clasp)
            return CaseResult(
                "III",
                clasp=clasp,
                pendent=g.vertices[pend],
                partner=g.vertices[partner],
                dprime=dprime,
            )
    raise ClassificationFailure("no pendent edge with both ends marked")


def split_case3(d: LinkDiagram, clasp) -> tuple[LinkDiagram, tuple[int, int]]:
    """Remove the clasp circle hooked through crossings ``clasp`` and splice
    the strand it was hooked around."""
    x, y = clasp
    if x == y or not (0 <= x < d.n and 0 <= y < d.n):
        raise InvalidWitness(f"bad clasp crossings {clasp}")
    X, Y = d.crossings[x], d.crossings[y]
    circle = None
    for s in (0, 1):
        a, b = X[s], X[s + 2]
        ends_a = [e for e in d.ends[a] if e[0] == y]
        ends_b = [e for e in d.ends[b] if e[0] == y]
        if a != b and ends_a and ends_b and (ends_a[0][1] - ends_b[0][1]) % 4 == 2:
            circle = (s, ends_a[0][1] % 2)
            break
    if circle is None:
        raise InvalidWitness(f"crossings {clasp} do not hold a clasp circle")
    s, t = circle
    dropped = {X[s], X[s + 2]}
    parent = {a: a for a in d.arcs}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    union(X[s + 1], X[(s + 3) % 4])
    union(Y[t + 1], Y[(t + 3) % 4])
    rest = [tuple(find(a) for a in z) for k, z in enumerate(d.crossings) if k not in (x, y)]
    used = {a for z in rest for a in z}
    closed = {find(a) for a in d.arcs if a not in dropped} - used
    dense = {a: i + 1 for i, a in enumerate(sorted(used))}
    dprime = orient(tuple(tuple(dense[a] for a in z) for z in rest), d.loops + len(closed))
    return dprime, (x, y)
