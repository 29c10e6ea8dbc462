"""Exact integer lattice arithmetic: Smith and Hermite forms, solving, kernels.

Matrices are lists of rows of Python ints.  Lattices are given by generating
vectors; ``columns`` arguments hold one generator per column.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

Matrix = list


def eye(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def matvec(a: Matrix, v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def det(a: Matrix) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(a: Matrix, nrows: int | None = None, ncols: int | None = None):
    """Return ``(diag, U, V)`` with ``U a V`` diagonal and ``diag[i] | diag[i+1]``.

    ``U`` and ``V`` are unimodular; ``diag`` lists the nonzero invariant
    factors (all positive).
    """
    m = len(a) if nrows is None else nrows
    n = (len(a[0]) if a else 0) if ncols is None else ncols
    A = [list(r) for r in a] if a else [[0] * n for _ in range(m)]
    U = eye(m)
    V = eye(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        if c:
            A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        if c:
            for row in A:
                row[dst] += c * row[src]
            for row in V:
                row[dst] += c * row[src]

    diag = []
    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return diag, U, V
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
    return diag, U, V


def solve(a: Matrix, b: Sequence[int], ncols: int | None = None) -> list[int] | None:
    """An integer solution ``x`` of ``a x = b``, or ``None``."""
    m = len(b)
    n = (len(a[0]) if a else 0) if ncols is None else ncols
    if n == 0:
        return [] if all(x == 0 for x in b) else None
    diag, U, V = smith_normal_form(a, m, n)
    c = matvec(U, b)
    y = [0] * n
    for i, x in enumerate(c):
        if i < len(diag):
            if x % diag[i]:
                return None
            y[i] = x // diag[i]
        elif x:
            return None
    return matvec(V, y)


def nullspace(a: Matrix, ncols: int | None = None) -> list[list[int]]:
    """Basis of the integer kernel ``{x : a x = 0}`` as a list of vectors."""
    n = (len(a[0]) if a else 0) if ncols is None else ncols
    m = len(a)
    diag, _, V = smith_normal_form(a, m, n)
    r = len(diag)
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


def hermite_basis(vectors: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """Canonical row-echelon (Hermite) basis of the lattice spanned by ``vectors``."""
    rows = [list(v) for v in vectors if any(v)]
    basis: list[list[int]] = []
    col = 0
    while rows and col < dim:
        live = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not live:
            col += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            p = live[0]
            nxt = [p]
            for r in live[1:]:
                q = r[col] // p[col]
                r2 = [x - q * y for x, y in zip(r, p)]
                if r2[col]:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            live = nxt
        p = live[0]
        if p[col] < 0:
            p = [-x for x in p]
        basis.append(p)
        rows = rest
        col += 1
    # reduce entries above pivots
    for i, row in enumerate(basis):
        c = next(j for j, x in enumerate(row) if x)
        for k in range(i):
            q = basis[k][c] // row[c]
            if q:
                basis[k] = [x - q * y for x, y in zip(basis[k], row)]
    return basis


def in_lattice(v: Sequence[int], generators: Sequence[Sequence[int]]) -> bool:
    gens = [list(g) for g in generators]
    if not gens:
        return not any(v)
    cols = transpose(gens)
    return solve(cols, list(v), ncols=len(gens)) is not None


def intersect(gens1, gens2, dim: int) -> list[list[int]]:
    """Generators of the intersection of two lattices in ``Z^dim``."""
    g1 = [list(v) for v in gens1]
    g2 = [list(v) for v in gens2]
    if not g1 or not g2:
        return []
    k1, k2 = len(g1), len(g2)
    # columns: g1 then -g2
    a = [[g1[j][i] for j in range(k1)] + [-g2[j][i] for j in range(k2)] for i in range(dim)]
    kern = nullspace(a, k1 + k2)
    out = []
    for u in kern:
        out.append([sum(u[j] * g1[j][i] for j in range(k1)) for i in range(dim)])
    return hermite_basis(out, dim)


def same_lattice(gens1, gens2, dim: int) -> bool:
    return hermite_basis(gens1, dim) == hermite_basis(gens2, dim)


def quotient(generators: Sequence[Sequence[int]], dim: int):
    """Describe ``Z^dim / L`` for ``L`` spanned by ``generators``.

    Returns ``(rank, torsion, P)``: the quotient is ``Z^rank + (+) Z/torsion``
    and ``P`` is an integer matrix whose rows map ``x`` to quotient coordinates,
    free coordinates first, then torsion coordinates (to be reduced modulo
    their invariant factors).
    """
    gens = [list(g) for g in generators if any(g)]
    if gens:
        cols = transpose(gens)
        diag, U, _ = smith_normal_form(cols, dim, len(gens))
    else:
        diag, U = [], eye(dim)
    torsion_rows = [(d, U[i]) for i, d in enumerate(diag) if d != 1]
    free_rows = [U[i] for i in range(len(diag), dim)]
    P = free_rows + [row for _, row in torsion_rows]
    return len(free_rows), [d for d, _ in torsion_rows], P


def inverse_unimodular(a: Matrix) -> Matrix:
    n = len(a)
    out = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        x = solve(a, e, n)
        if x is None:
            raise ValueError("matrix is not unimodular")
        out.append(x)
    return transpose(out)


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g
