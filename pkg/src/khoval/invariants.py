"""Link signature through the Goeritz form, the Jones polynomial from the
Kauffman bracket, and checks on Khovanov tables.

The Jones state sum deliberately shares nothing with the homology pipeline:
loops are counted by walking arc ends rather than by the union-find in
:mod:`khoval.cube`.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from khoval.cube import DEFAULT_MAX_CROSSINGS
from khoval.diagram import Coloring, FaceStructure, LinkDiagram, checkerboard, faces, is_alternating
from khoval.errors import EmptyHomology, NugatoryCrossing, TooManyCrossings
from khoval.homology import BigradedGroup

# -- Goeritz form ----------------------------------------------------------------


@dataclass(frozen=True)
class GoeritzData:
    white: tuple[int, ...]  # face indices X_0, X_1, ..., X_n (X_0 is deleted)
    eta: tuple[int, ...]
    types: tuple[int, ...]  # 1 or 2 per crossing
    matrix: tuple[tuple[int, ...], ...]
    mu: int

    @property
    def n(self) -> int:
        return len(self.matrix)


def _white_pair(d: LinkDiagram, fs: FaceStructure, col: Coloring, k: int) -> tuple[int, int, int]:
    """``(eta, face, face)``: eta is +1 when the white corners are (k,0),(k,2)."""
    f = [fs.corner_face[(k, p)] for p in range(4)]
    if not col.black[f[0]]:
        return 1, f[0], f[2]
    return -1, f[1], f[3]


def goeritz(
    d: LinkDiagram,
    coloring: Coloring | None = None,
    fs: FaceStructure | None = None,
    deleted: int | None = None,
) -> GoeritzData:
    """Goeritz matrix of ``d`` for a checkerboard coloring.

    Without an explicit coloring an alternating diagram is colored so that
    every incidence number is +1.  ``deleted`` picks X_0 by face index; the
    default is the white face with the longest boundary.
    """
    fs = faces(d) if fs is None else fs
    if coloring is None:
        coloring = checkerboard(d, fs)
        if is_alternating(d) and d.n and _white_pair(d, fs, coloring, 0)[0] < 0:
            coloring = coloring.reversed()
    whites = [f for f, b in enumerate(coloring.black) if not b]
    if deleted is None:
        deleted = max(whites, key=lambda f: (len(fs.faces[f]), -f)) if whites else None
    elif deleted not in whites:
        raise ValueError(f"face {deleted} is not white")
    order = ([deleted] if deleted is not None else []) + [f for f in whites if f != deleted]
    idx = {f: i for i, f in enumerate(order)}
    size = len(order)
    full = [[0] * size for _ in range(size)]
    etas, types = [], []
    signs = d.signs
    for k in range(d.n):
        eta, u, v = _white_pair(d, fs, coloring, k)
        if u == v:
            raise NugatoryCrossing(f"crossing {k} meets white face {u} twice")
        etas.append(eta)
        # the oriented smoothing keeps the white corners apart exactly when sign*eta = +1
        types.append(2 if signs[k] * eta > 0 else 1)
        full[idx[u]][idx[v]] -= eta
        full[idx[v]][idx[u]] -= eta
    for i in range(size):
        full[i][i] = -sum(full[i][t] for t in range(size) if t != i)
    matrix = tuple(tuple(row[1:]) for row in full[1:])
    mu = sum(e for e, t in zip(etas, types) if t == 2)
    return GoeritzData(tuple(order), tuple(etas), tuple(types), matrix, mu)


def matrix_signature(m) -> int:
    """Signature of a symmetric rational matrix by congruence diagonalization."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    sig = 0
    k = 0
    while k < n:
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for row in a:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    k += 1
                    continue
                # row_k += row_j and col_k += col_j makes the pivot 2*a[k][j]
                a[k] = [x + y for x, y in zip(a[k], a[j])]
                for row in a:
                    row[k] += row[j]
        p = a[k][k]
        sig += 1 if p > 0 else -1
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / p
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
                for row in a:
                    row[i] -= f * row[k]
        k += 1
    return sig


def signature_gl(d: LinkDiagram) -> int:
    """Link signature as sign G(D) - mu(D)."""
    if d.n == 0:
        return 0
    fs = faces(d)
    try:
        g = goeritz(d, fs=fs)
    except NugatoryCrossing:
        col = checkerboard(d, fs)
        if is_alternating(d) and _white_pair(d, fs, col, 0)[0] < 0:
            col = col.reversed()
        g = goeritz(d, col.reversed(), fs)
    return matrix_signature(g.matrix) - g.mu


# -- Jones polynomial from the Kauffman bracket ----------------------------------

# slot pairs joined by each smoothing; kept local so the oracle does not import
# the resolution conventions of the homology code
_SMOOTHINGS = (((0, 1), (2, 3)), ((0, 3), (1, 2)))


def _state_loops(d: LinkDiagram, state: int) -> int:
    partner_arc: dict[tuple[int, int], tuple[int, int]] = {}
    for a, ends in d.ends.items():
        e1, e2 = ends
        partner_arc[e1] = e2
        partner_arc[e2] = e1
    partner_smooth: dict[tuple[int, int], tuple[int, int]] = {}
    for k in range(d.n):
        for s, t in _SMOOTHINGS[state >> k & 1]:
            partner_smooth[(k, s)] = (k, t)
            partner_smooth[(k, t)] = (k, s)
    seen = set()
    loops = 0
    for start in partner_arc:
        if start in seen:
            continue
        loops += 1
        cur = start
        while cur not in seen:
            seen.add(cur)
            nxt = partner_arc[cur]
            seen.add(nxt)
            cur = partner_smooth[nxt]
    return loops + d.loops


def _pmul(p: dict[int, int], q: dict[int, int]) -> dict[int, int]:
    out: Counter = Counter()
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] += x * y
    return {e: c for e, c in out.items() if c}


def kauffman_bracket(d: LinkDiagram, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> dict[int, int]:
    """Unnormalized bracket in A: each loop contributes -A^2 - A^-2."""
    if d.n > max_crossings:
        raise TooManyCrossings(f"{d.n} crossings exceeds the limit of {max_crossings}")
    counts: Counter = Counter()
    for state in range(1 << d.n):
        ones = bin(state).count("1")
        counts[(d.n - 2 * ones, _state_loops(d, state))] += 1
    loop = {2: -1, -2: -1}
    powers = {0: {0: 1}}
    out: Counter = Counter()
    for (a, loops), mult in counts.items():
        while loops not in powers:
            top = max(powers)
            powers[top + 1] = _pmul(powers[top], loop)
        for e, c in powers[loops].items():
            out[e + a] += mult * c
    return {e: c for e, c in sorted(out.items()) if c}


def jones_kauffman(d: LinkDiagram, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> dict[int, int]:
    """Unnormalized Jones polynomial as ``{q-exponent: coefficient}``.

    Multiplies the bracket by ``(-A^3)^(-w)`` and substitutes ``A^2 = -q^-1``;
    the unknot gives ``q + q^-1``.
    """
    bracket = kauffman_bracket(d, max_crossings)
    w = d.writhe
    out: Counter = Counter()
    for e, c in bracket.items():
        e2 = e - 3 * w
        if e2 % 2:
            raise ValueError("odd power of A in the normalized bracket")
        m = e2 // 2
        out[-m] += c * (-1) ** (w % 2) * (-1) ** (m % 2)
    return {e: c for e, c in sorted(out.items()) if c}


def format_laurent(p: dict[int, int], var: str = "q") -> str:
    if not p:
        return "0"
    terms = []
    for e, c in sorted(p.items()):
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if mono:
            coef = "" if c == 1 else "-" if c == -1 else str(c)
        else:
            coef = str(c)
        terms.append(coef + mono)
    return " + ".join(terms).replace("+ -", "- ")


# -- Khovanov polynomial ---------------------------------------------------------


@dataclass(frozen=True)
class KhPolynomial:
    coeffs: dict[tuple[int, int], int]  # (t-degree, q-degree) -> rational rank
    sigma: int
    p: int
    m: int
    a_p: int  # coefficient at (p, 2p - sigma - 1)
    b_m: int  # coefficient at (m, 2m - sigma + 1)

    def __str__(self) -> str:
        terms = []
        for (i, j), c in sorted(self.coeffs.items()):
            parts = []
            if i:
                parts.append("t" if i == 1 else f"t^{i}")
            if j:
                parts.append("q" if j == 1 else f"q^{j}")
            mono = " ".join(parts) or "1"
            terms.append(mono if c == 1 else f"{c} {mono}")
        return " + ".join(terms)

    def to_json(self) -> dict:
        return {
            "terms": [{"t": i, "q": j, "coeff": c} for (i, j), c in sorted(self.coeffs.items())],
            "sigma": self.sigma,
            "p": self.p,
            "m": self.m,
            "a_p": self.a_p,
            "b_m": self.b_m,
        }


def kh_polynomial(h: BigradedGroup, sigma: int) -> KhPolynomial:
    coeffs = {bd: r for bd, (r, _) in h.groups.items() if r}
    if not coeffs:
        raise EmptyHomology("rational homology is zero")
    p = min(i for i, _ in coeffs)
    m = max(i for i, _ in coeffs)
    return KhPolynomial(
        coeffs,
        sigma,
        p,
        m,
        coeffs.get((p, 2 * p - sigma - 1), 0),
        coeffs.get((m, 2 * m - sigma + 1), 0),
    )


# -- verifiers -------------------------------------------------------------------


@dataclass
class Report:
    check: str
    violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, i: int, j: int, detail: str) -> None:
        self.violations.append({"i": i, "j": j, "detail": detail})

    def to_json(self) -> dict:
        return {"check": self.check, "pass": self.passed, "violations": self.violations}

    def render(self) -> str:
        lines = [f"{self.check}: {'pass' if self.passed else 'FAIL'}"]
        lines += [f"  ({v['i']}, {v['j']}): {v['detail']}" for v in self.violations]
        return "\n".join(lines)

    def __str__(self) -> str:
        return json.dumps(self.to_json())


def verify_thin(h: BigradedGroup, sigma: int) -> Report:
    """Rational support on j = 2i - sigma +- 1 with unit coefficients at the
    diagonal start and subdiagonal end."""
    rep = Report("thin")
    if not h.support():
        rep.add(0, 0, "rational homology is zero")
        return rep
    for i, j in sorted(h.support()):
        if j - 2 * i + sigma not in (-1, 1):
            rep.add(i, j, f"rank {h.rank(i, j)} off the lines j = 2i{-sigma:+d} +- 1")
    kh = kh_polynomial(h, sigma)
    if kh.a_p != 1:
        rep.add(kh.p, 2 * kh.p - sigma - 1, f"a_p = {kh.a_p}, expected 1")
    if kh.b_m != 1:
        rep.add(kh.m, 2 * kh.m - sigma + 1, f"b_m = {kh.b_m}, expected 1")
    return rep


def verify_torsion(hz: BigradedGroup, sigma: int, p: int, m: int) -> Report:
    rep = Report("torsion")
    for i, j in sorted(hz.torsion_support()):
        if not (p + 1 <= i <= m and j == 2 * i - sigma - 1):
            tors = " + ".join(f"Z/{t}" for t in hz.torsion(i, j))
            rep.add(i, j, f"torsion {tors} outside the allowed diagonal")
    return rep


def verify_box(hbar: BigradedGroup, c: int, o: int) -> Report:
    rep = Report("box")
    for (i, j), _ in hbar:
        if not (0 <= i <= c and -o <= j <= 2 * c - o + 2):
            rep.add(i, j, "nonzero outside the box")
    for i, j in ((0, -o), (c, 2 * c - o + 2)):
        r, t = hbar.rank(i, j), hbar.torsion(i, j)
        if r != 1 or t:
            rep.add(i, j, f"corner group has rank {r} and torsion {list(t)}, expected Z")
    return rep
