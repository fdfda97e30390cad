"""Exact dense linear algebra over Q or a cyclotomic field.

Matrices are lists of rows.  Entries only need ``+ - * /`` and truthiness
for "nonzero", so the same routines serve Fraction and CycloNum entries.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

Matrix = list[list]


def _inv(x):
    if isinstance(x, int):
        return Fraction(1, x)
    if isinstance(x, Fraction):
        return 1 / x
    return x.inverse()


def identity(n: int, one=Fraction(1), zero=Fraction(0)) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int, zero=Fraction(0)) -> Matrix:
    return [[zero] * cols for _ in range(rows)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    n, m = len(b), len(b[0]) if b else 0
    if a and len(a[0]) != n:
        raise ValueError("shape mismatch")
    zero = b[0][0] * 0 if n and m else 0
    out = []
    for row in a:
        acc = [zero] * m
        for kk, x in enumerate(row):
            if x:
                brow = b[kk]
                for j in range(m):
                    y = brow[j]
                    if y:
                        acc[j] = acc[j] + x * y
        out.append(acc)
    return out


def matvec(a: Matrix, v: Sequence) -> list:
    zero = v[0] * 0 if len(v) else 0
    out = []
    for row in a:
        acc = zero
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def mat_map(f: Callable, a: Matrix) -> Matrix:
    return [[f(x) for x in row] for row in a]


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return len(a) == len(b) and all(
        len(r1) == len(r2) and all(x == y for x, y in zip(r1, r2)) for r1, r2 in zip(a, b)
    )


def is_identity(a: Matrix) -> bool:
    return all(a[i][j] == (1 if i == j else 0) for i in range(len(a)) for j in range(len(a[i])))


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns; input is not modified."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = _inv(m[r][c])
        m[r] = [x * inv if x else x for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                ri = m[i]
                rr = m[r]
                m[i] = [x - f * y if y else x for x, y in zip(ri, rr)]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1]) if a else 0


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    one = Fraction(1) if isinstance(a[0][0], (int, Fraction)) else a[0][0].ctx.one()
    zero = one * 0
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(a)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red[:n]]


def det(a: Matrix):
    """Determinant by Gaussian elimination."""
    n = len(a)
    m = [list(r) for r in a]
    sign = 1
    result = None
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return m[0][0] * 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        piv = m[c][c]
        result = piv if result is None else result * piv
        inv = _inv(piv)
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y if y else x for x, y in zip(m[i], m[c])]
    if result is None:
        return 1
    return result if sign > 0 else -result


def nullspace(a: Matrix) -> Matrix:
    """Basis vectors (as lists) of {x : a x = 0}."""
    if not a:
        return []
    cols = len(a[0])
    red, piv = rref(a)
    zero = red[0][0] * 0
    one = zero + 1
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = [zero] * cols
        v[f] = one
        for r, p in enumerate(piv):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence):
    """Some solution x of a x = b, or None."""
    aug = [list(row) + [bb] for row, bb in zip(a, b)]
    red, piv = rref(aug)
    cols = len(a[0])
    if cols in piv:
        return None
    zero = red[0][0] * 0
    x = [zero] * cols
    for r, p in enumerate(piv):
        x[p] = red[r][cols]
    return x


def trace(a: Matrix):
    t = a[0][0] * 0
    for i in range(len(a)):
        t = t + a[i][i]
    return t
