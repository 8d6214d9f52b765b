"""Dense exact linear algebra over Q or Q(zeta_N).

Matrices are lists of row lists; entries are Fractions or Cyclotomic numbers.
"""
from __future__ import annotations

from fractions import Fraction


def rref(rows: list, ncols: int | None = None):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv if v else v for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b if b else a for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: list) -> int:
    if not rows or not rows[0]:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: list, ncols: int) -> list:
    """Basis of {v : M v = 0} as a list of vectors."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fcol]
        basis.append(v)
    return basis


def inverse(mat: list) -> list:
    n = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    red, pivots = rref(aug, n)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def column_basis(mat: list, ncols: int) -> list:
    """Indices of a maximal set of independent columns, greedily left to right."""
    return rref(mat, ncols)[1]


def mat_vec(mat: list, vec: list) -> list:
    out = []
    for row in mat:
        acc = Fraction(0)
        for a, b in zip(row, vec):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def in_span(vectors: list, target: list) -> bool:
    if not any(target):
        return True
    if not vectors:
        return False
    return rank(vectors + [target]) == rank(vectors)
