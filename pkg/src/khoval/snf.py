"""Smith normal form over the integers.

Python integers throughout, so there is no overflow.  Khovanov differentials
are very sparse with entries +-1, so :func:`invariant_factors` first peels
off unit pivots on a dict-of-dicts matrix and only hands the (usually tiny)
remainder to the dense routine.
"""

from __future__ import annotations

Matrix = list[list[int]]
# column-major sparse matrix: column -> {row: value}
SparseCols = dict[int, dict[int, int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(r[t] * b[t][j] for t in range(len(b))) for j in range(cols)] for r in a]


def smith_normal_form(m: Matrix) -> tuple[list[int], Matrix, Matrix]:
    """Return ``(factors, U, V)`` with ``U @ m @ V`` diagonal.

    ``factors`` are the nonzero diagonal entries, positive, each dividing the
    next; ``U`` and ``V`` are unimodular.
    """
    a = [list(map(int, row)) for row in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u, v = identity(nr), identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    factors = []
    t = 0
    while t < min(nr, nc):
        nz = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = a[t][t]
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            rest = [(abs(a[i][t]), i, t) for i in range(t + 1, nr) if a[i][t]]
            rest += [(abs(a[t][j]), t, j) for j in range(t + 1, nc) if a[t][j]]
            if rest:
                _, i, j = min(rest)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        factors.append(a[t][t])
        t += 1
    return factors, u, v


def sparse_from_dense(m: Matrix) -> SparseCols:
    cols: SparseCols = {}
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            if x:
                cols.setdefault(j, {})[i] = int(x)
    return cols


def invariant_factors(cols: SparseCols) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix, ascending."""
    rows: dict[int, dict[int, int]] = {}
    colrows: dict[int, set[int]] = {}
    for c, entries in cols.items():
        for r, x in entries.items():
            if x:
                rows.setdefault(r, {})[c] = x
                colrows.setdefault(c, set()).add(r)
    units = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(colrows, key=lambda c: len(colrows[c])):
            rs = colrows.get(c)
            if not rs:
                colrows.pop(c, None)
                continue
            cands = [r for r in rs if abs(rows[r][c]) == 1]
            if not cands:
                continue
            r = min(cands, key=lambda r: (len(rows[r]), r))
            prow = rows.pop(r)
            s = prow[c]
            for r2 in list(rs):
                if r2 == r:
                    continue
                row2 = rows[r2]
                f = row2[c] * s
                for c2, x in prow.items():
                    val = row2.get(c2, 0) - f * x
                    if val:
                        if c2 not in row2:
                            colrows[c2].add(r2)
                        row2[c2] = val
                    else:
                        row2.pop(c2, None)
                        colrows[c2].discard(r2)
            for c2 in prow:
                colrows[c2].discard(r)
            del colrows[c]
            units += 1
            progress = True
    rows = {r: e for r, e in rows.items() if e}
    rest: list[int] = []
    if rows:
        cs = sorted({c for e in rows.values() for c in e})
        cidx = {c: j for j, c in enumerate(cs)}
        dense = [[0] * len(cs) for _ in rows]
        for i, e in enumerate(rows.values()):
            for c, x in e.items():
                dense[i][cidx[c]] = x
        rest = smith_normal_form(dense)[0]
    return [1] * units + rest


def rank_mod_p(cols: SparseCols, p: int) -> int:
    """Rank over Z/p by plain Gaussian elimination; independent of the SNF."""
    rows: dict[int, dict[int, int]] = {}
    for c, entries in cols.items():
        for r, x in entries.items():
            if x % p:
                rows.setdefault(r, {})[c] = x % p
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for row in rows.values():
        row = dict(row)
        while row:
            c = min(row)
            if c not in pivots:
                inv = pow(row[c], -1, p)
                pivots[c] = {k: v * inv % p for k, v in row.items()}
                rank += 1
                break
            f = row[c]
            for k, v in pivots[c].items():
                val = (row.get(k, 0) - f * v) % p
                if val:
                    row[k] = val
                else:
                    row.pop(k, None)
    return rank
