"""Exact integer linear algebra on top of sympy's Smith normal form."""

from __future__ import annotations

from sympy import Matrix, ZZ as SZZ
from sympy.matrices.normalforms import smith_normal_decomp


def matrix(rows, nrows: int, ncols: int) -> Matrix:
    if nrows == 0 or ncols == 0:
        return Matrix.zeros(nrows, ncols)
    return Matrix(rows)


def smith(M: Matrix):
    """(diagonal entries, U, V) with U*M*V the Smith form; U, V unimodular."""
    m, n = M.shape
    if m == 0 or n == 0:
        return [], Matrix.eye(m), Matrix.eye(n)
    S, U, V = smith_normal_decomp(M, domain=SZZ)
    diag = [int(S[i, i]) for i in range(min(m, n))]
    return diag, U, V


# an integer solution reduces to a solution mod any prime, so a cheap
# elimination mod this prime rules out most unsolvable systems early
_FILTER_PRIME = 2_147_483_647


def solve(M: Matrix, rhs) -> list[int] | None:
    """An integer vector x with M x = rhs, or None."""
    M = M if isinstance(M, Matrix) else Matrix(M)
    m, n = M.shape
    r = Matrix(list(rhs))
    if m == 0:
        return [0] * n
    if n == 0:
        return [] if all(v == 0 for v in rhs) else None
    if solve_mod(M, rhs, _FILTER_PRIME) is None:
        return None
    diag, U, V = smith(M)
    ur = U * r
    y = []
    for i in range(m):
        s = diag[i] if i < len(diag) else 0
        if s == 0:
            if ur[i] != 0:
                return None
            if i < n:
                y.append(0)
        else:
            if ur[i] % s:
                return None
            y.append(ur[i] // s)
    y += [0] * (n - len(y))
    x = V * Matrix(y)
    sol = [int(v) for v in x]
    assert list(M * Matrix(sol)) == list(r)
    return sol


def rank_and_factors(M: Matrix) -> tuple[int, list[int]]:
    """Rank of M and its invariant factors larger than 1."""
    diag, _, _ = smith(M)
    nz = [abs(s) for s in diag if s != 0]
    return len(nz), [s for s in nz if s != 1]


def rank_mod(M: Matrix, p: int) -> int:
    """Rank of M over the field with p elements (p prime)."""
    rows = [[int(v) % p for v in M.row(i)] for i in range(M.rows)]
    rank, col, ncols = 0, 0, M.cols
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def solve_mod(M: Matrix, rhs, p: int) -> list[int] | None:
    """A solution of M x = rhs over the field with p elements, or None."""
    if isinstance(M, Matrix):
        M = M.tolist()
    m, n = len(M), len(M[0]) if M else 0
    rows = [[int(v) % p for v in M[i]] + [int(rhs[i]) % p] for i in range(m)]
    pivots, r = [], 0
    for col in range(n):
        piv = next((i for i in range(r, m) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], -1, p)
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(row[n] for row in rows[r:]):
        return None
    x = [0] * n
    for i, col in enumerate(pivots):
        x[col] = rows[i][n]
    return x
