"""Exact dense matrix helpers over the supported fields.

Rank is computed by fraction-free (Bareiss) elimination.  Rows are first
scaled by the lcm of their denominators so that the elimination runs on
integers, or on pairs of integers for the rings Z[i] and Z[omega], where
every Bareiss quotient is exact.
"""

from __future__ import annotations

from math import lcm
from typing import Sequence

from .field import Field, FieldElem, common_field, widen

Matrix = list[list[FieldElem]]


def shape(M: Sequence[Sequence]) -> tuple[int, int]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if any(len(r) != cols for r in M):
        raise ValueError("ragged matrix")
    return rows, cols


def as_matrix(M: Sequence[Sequence], field: Field | None = None) -> Matrix:
    flat = [x for row in M for x in row]
    if field is None:
        field = common_field(flat)
    return [[widen(x, field) for x in row] for row in M]


def identity(n: int, field: Field = Field.Q) -> Matrix:
    return [[FieldElem(int(i == j), 0, field) for j in range(n)] for i in range(n)]


def transpose(M: Matrix) -> Matrix:
    return [list(col) for col in zip(*M)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n, k = shape(A)
    k2, m = shape(B)
    if k != k2:
        raise ValueError(f"cannot multiply {n}x{k} by {k2}x{m}")
    if k == 0:
        f = Field.Q
        return [[FieldElem(0, 0, f) for _ in range(m)] for _ in range(n)]
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), A[0][0] * 0) for col in Bt] for row in A]


def matvec(A: Matrix, v: Sequence[FieldElem]) -> list[FieldElem]:
    n, k = shape(A)
    if len(v) != k:
        raise ValueError("dimension mismatch")
    out = []
    for row in A:
        acc = None
        for a, x in zip(row, v):
            acc = a * x if acc is None else acc + a * x
        out.append(acc)
    return out


def _scaled_rows(M: Sequence[Sequence[FieldElem]]):
    # clear denominators row by row; rank is unchanged
    rows = []
    for row in M:
        d = 1
        for x in row:
            d = lcm(d, x.a.denominator, x.b.denominator)
        rows.append([(int(x.a * d), int(x.b * d)) for x in row])
    return rows


def _rank_int(M: list[list[int]]) -> int:
    n = len(M)
    m = len(M[0]) if n else 0
    prev = 1
    r = 0
    while r < min(n, m):
        piv = None
        for i in range(r, n):
            row = M[i]
            for j in range(r, m):
                if row[j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        M[r], M[i] = M[i], M[r]
        if j != r:
            for row in M:
                row[r], row[j] = row[j], row[r]
        p = M[r][r]
        top = M[r]
        for i in range(r + 1, n):
            row = M[i]
            f = row[r]
            for j in range(r + 1, m):
                row[j] = (row[j] * p - f * top[j]) // prev
            row[r] = 0
        prev = p
        r += 1
    return r


def _ring_ops(field: Field):
    omega = field is Field.Q_OMEGA

    def mul(x, y):
        a, b = x
        c, d = y
        if omega:
            return (a * c - b * d, a * d + b * c - b * d)
        return (a * c - b * d, a * d + b * c)

    def exact_div(x, y):
        c, d = y
        if omega:
            conj = (c - d, -d)
            n = c * c - c * d + d * d
        else:
            conj = (c, -d)
            n = c * c + d * d
        u, v = mul(x, conj)
        qu, ru = divmod(u, n)
        qv, rv = divmod(v, n)
        if ru or rv:
            raise ArithmeticError("inexact division in fraction-free elimination")
        return (qu, qv)

    return mul, exact_div


def _rank_pairs(M: list[list[tuple[int, int]]], field: Field) -> int:
    mul, exact_div = _ring_ops(field)
    n = len(M)
    m = len(M[0]) if n else 0
    prev = (1, 0)
    r = 0
    while r < min(n, m):
        piv = None
        for i in range(r, n):
            row = M[i]
            for j in range(r, m):
                if row[j] != (0, 0):
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        M[r], M[i] = M[i], M[r]
        if j != r:
            for row in M:
                row[r], row[j] = row[j], row[r]
        p = M[r][r]
        top = M[r]
        for i in range(r + 1, n):
            row = M[i]
            f = row[r]
            for j in range(r + 1, m):
                x = mul(row[j], p)
                y = mul(f, top[j])
                row[j] = exact_div((x[0] - y[0], x[1] - y[1]), prev)
            row[r] = (0, 0)
        prev = p
        r += 1
    return r


def rank(M: Sequence[Sequence[FieldElem]]) -> int:
    """Exact rank of a matrix of field elements."""
    n, m = shape(M)
    if n == 0 or m == 0:
        return 0
    field = common_field(x for row in M for x in row)
    rows = _scaled_rows(as_matrix(M, field))
    if field is Field.Q:
        return _rank_int([[a for a, _ in row] for row in rows])
    return _rank_pairs(rows, field)


def is_invertible(M: Sequence[Sequence[FieldElem]]) -> bool:
    n, m = shape(M)
    return n == m and rank(M) == n
