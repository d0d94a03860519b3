"""Homology of bigraded complexes: integral via Smith normal form, mod p by
direct elimination, and the connecting map of a skein decomposition over Q."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from khoval.complex import Bidegree, ChainComplex, SkeinDecomposition
from khoval.errors import RepresentativeMismatch
from khoval.snf import SparseCols, invariant_factors, rank_mod_p


@dataclass(frozen=True)
class BigradedGroup:
    """``groups[(i, j)] = (free rank, torsion invariant factors)``; zero groups omitted."""

    groups: dict[Bidegree, tuple[int, tuple[int, ...]]]

    @classmethod
    def from_ranks(cls, ranks: dict[Bidegree, int]) -> "BigradedGroup":
        return cls({bd: (r, ()) for bd, r in ranks.items() if r})

    def rank(self, i: int, j: int) -> int:
        return self.groups.get((i, j), (0, ()))[0]

    def torsion(self, i: int, j: int) -> tuple[int, ...]:
        return self.groups.get((i, j), (0, ()))[1]

    def __iter__(self) -> Iterator[tuple[Bidegree, tuple[int, tuple[int, ...]]]]:
        return iter(sorted(self.groups.items()))

    def support(self) -> set[Bidegree]:
        """Bidegrees with nonzero rational rank."""
        return {bd for bd, (r, _) in self.groups.items() if r}

    def torsion_support(self) -> set[Bidegree]:
        return {bd for bd, (_, t) in self.groups.items() if t}

    def rational(self) -> "BigradedGroup":
        return BigradedGroup.from_ranks({bd: r for bd, (r, _) in self.groups.items()})

    def shifted(self, k: int, l: int) -> "BigradedGroup":
        """``[k]{l}``: move ``(i, j)`` to ``(i - k, j - l)``."""
        return BigradedGroup({(i - k, j - l): g for (i, j), g in self.groups.items()})

    def mirrored(self) -> "BigradedGroup":
        """Rational ranks reflected through the origin."""
        return BigradedGroup.from_ranks({(-i, -j): r for (i, j), (r, _) in self.groups.items()})

    def euler(self) -> dict[int, int]:
        """Graded Euler characteristic as ``{q-exponent: coefficient}``."""
        out: dict[int, int] = {}
        for (i, j), (r, _) in self.groups.items():
            out[j] = out.get(j, 0) + (-1) ** (i % 2) * r
        return {j: c for j, c in sorted(out.items()) if c}

    def to_rows(self) -> list[dict]:
        return [
            {"i": i, "j": j, "rank": r, "torsion": list(t)}
            for (i, j), (r, t) in sorted(self.groups.items())
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_rows(), separators=(",", ":"))

    @classmethod
    def from_rows(cls, rows: list[dict]) -> "BigradedGroup":
        return cls({(r["i"], r["j"]): (r["rank"], tuple(r["torsion"])) for r in rows})


def homology(cx: ChainComplex, check: bool = True) -> BigradedGroup:
    """Integral homology of every bidegree.

    Free rank is ``dim - rank(out) - rank(in)``; torsion is read off the
    invariant factors of the incoming differential.
    """
    if check:
        cx.check_d_squared()
    factors: dict[Bidegree, list[int]] = {}

    def facs(bd):
        if bd not in factors:
            factors[bd] = invariant_factors(cx.diff.get(bd, {}))
        return factors[bd]

    groups = {}
    for i, j in cx.bidegrees():
        n = cx.dim((i, j))
        incoming = facs((i - 1, j))
        free = n - len(facs((i, j))) - len(incoming)
        tors = tuple(f for f in incoming if f > 1)
        if free or tors:
            groups[(i, j)] = (free, tors)
    return BigradedGroup(groups)


def homology_mod_p(cx: ChainComplex, p: int) -> dict[Bidegree, int]:
    """Dimensions of homology with Z/p coefficients."""
    ranks = {bd: rank_mod_p(m, p) for bd, m in cx.diff.items()}
    out = {}
    for i, j in cx.bidegrees():
        dim = cx.dim((i, j)) - ranks.get((i, j), 0) - ranks.get((i - 1, j), 0)
        if dim:
            out[(i, j)] = dim
    return out


def universal_coefficients_mod_p(h: BigradedGroup, p: int) -> dict[Bidegree, int]:
    """Mod-p dimensions predicted from integral homology (differential raises i)."""
    out: dict[Bidegree, int] = {}
    for (i, j), (r, tors) in h.groups.items():
        pt = sum(1 for t in tors if t % p == 0)
        out[(i, j)] = out.get((i, j), 0) + r + pt
        if pt:
            out[(i - 1, j)] = out.get((i - 1, j), 0) + pt
    return {bd: v for bd, v in out.items() if v}


# -- rational linear algebra for the connecting map ----------------------------


def _qmatrix(cols: SparseCols, nrows: int, ncols: int) -> DomainMatrix:
    rows: dict[int, dict[int, object]] = {}
    for c, e in cols.items():
        for r, x in e.items():
            if x:
                rows.setdefault(r, {})[c] = QQ(x)
    return DomainMatrix(rows, (nrows, ncols), QQ)


def _columns(m: DomainMatrix) -> list[dict[int, object]]:
    """Column vectors of a DomainMatrix as sparse dicts."""
    nr, nc = m.shape
    cols: list[dict[int, object]] = [dict() for _ in range(nc)]
    for r, e in m.to_sdm().items():
        for c, x in e.items():
            cols[c][r] = x
    return cols


def _from_columns(cols: list[dict[int, object]], nrows: int) -> DomainMatrix:
    rows: dict[int, dict[int, object]] = {}
    for c, e in enumerate(cols):
        for r, x in e.items():
            if x:
                rows.setdefault(r, {})[c] = x
    return DomainMatrix(rows, (nrows, len(cols)), QQ)


@dataclass(frozen=True)
class HomologyBasis:
    """Cycle representatives of a basis of rational homology at one bidegree."""

    boundaries: list[dict[int, object]]
    reps: list[dict[int, object]]
    dim: int


def _homology_basis(cx: ChainComplex, bd: Bidegree) -> HomologyBasis:
    i, j = bd
    n = cx.dim(bd)
    if n == 0:
        return HomologyBasis([], [], 0)
    outgoing = cx.diff.get(bd, {})
    if any(outgoing.values()):
        kernel = _qmatrix(outgoing, cx.dim((i + 1, j)), n).nullspace()
        cycles = [dict(v) for v in kernel.to_sdm().values()]
    else:
        cycles = [{c: QQ(1)} for c in range(n)]
    boundaries = _columns(_qmatrix(cx.diff.get((i - 1, j), {}), n, cx.dim((i - 1, j))))
    boundaries = [b for b in boundaries if b]
    both = _from_columns(boundaries + cycles, n)
    _, pivots = both.rref()
    reps = [cycles[p - len(boundaries)] for p in pivots if p >= len(boundaries)]
    return HomologyBasis(boundaries, reps, len(reps))


@dataclass(frozen=True)
class ConnectingMap:
    """``delta[(i, j)]`` maps H(c0) at (i, j) to H(c1) at (i + 1, j) (rational matrix,
    rows indexed by the target basis)."""

    delta: dict[Bidegree, DomainMatrix] = field(repr=False)
    h0: dict[Bidegree, int]
    h1: dict[Bidegree, int]
    rank: dict[Bidegree, int]

    def kernel_rank(self, bd: Bidegree) -> int:
        return self.h0.get(bd, 0) - self.rank.get(bd, 0)

    def cokernel_rank(self, bd: Bidegree) -> int:
        """Cokernel of the map landing at ``bd`` in H(c1)."""
        src = (bd[0] - 1, bd[1])
        return self.h1.get(bd, 0) - self.rank.get(src, 0)


def connecting_map(dec: SkeinDecomposition) -> ConnectingMap:
    """Compute the connecting map by pushing cycle representatives through xi."""
    c0, c1 = dec.c0, dec.c1
    bases1: dict[Bidegree, HomologyBasis] = {}
    delta, h0, h1, rank = {}, {}, {}, {}
    for bd in c1.bidegrees():
        bases1[bd] = _homology_basis(c1, bd)
        if bases1[bd].dim:
            h1[bd] = bases1[bd].dim
    for bd in c0.bidegrees():
        b0 = _homology_basis(c0, bd)
        if not b0.dim:
            continue
        h0[bd] = b0.dim
        tgt = (bd[0] + 1, bd[1])
        b1 = bases1.get(tgt)
        if b1 is None or not b1.dim:
            rank[bd] = 0
            delta[bd] = DomainMatrix({}, (0, b0.dim), QQ)
            continue
        n1 = c1.dim(tgt)
        xi = _qmatrix(dec.xi.get(bd, {}), n1, c0.dim(bd))
        images = _columns(xi * _from_columns(b0.reps, c0.dim(bd)))
        nb = len(b1.boundaries)
        aug = _from_columns(b1.boundaries + b1.reps + images, n1)
        red, pivots = aug.rref()
        if any(p >= nb + b1.dim for p in pivots):
            raise RepresentativeMismatch(f"xi of a cycle at {bd} is not a cycle")
        red_rows = red.to_sdm()
        coords: dict[int, dict[int, object]] = {}
        for row, p in enumerate(pivots):
            if p >= nb:
                for c, x in red_rows.get(row, {}).items():
                    if c >= nb + b1.dim and x:
                        coords.setdefault(p - nb, {})[c - nb - b1.dim] = x
        m = DomainMatrix(coords, (b1.dim, b0.dim), QQ)
        delta[bd] = m
        rank[bd] = m.rank()
    return ConnectingMap(delta, h0, h1, rank)
