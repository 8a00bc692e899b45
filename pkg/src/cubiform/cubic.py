"""Cubic forms as symmetric trilinear tensors, their Hessians and transforms.

A :class:`CubicForm` in ``m`` variables stores the full symmetric tensor
``T`` sparsely, one entry per sorted index triple.  The value stored is
``T[a, b, c]`` itself (not divided by the number of orderings), so that

    F(x) = sum over all ordered (a, b, c) of T[a, b, c] x_a x_b x_c

and the Hessian entry ``(j, k)`` is the linear form ``6 * sum_c T[j, k, c] x_c``.
For a threefold this is the triple intersection form ``(sum x_i gamma_i)^3``.
Indices are 0-based in Python and 1-based in the JSON format.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from . import linalg
from .field import Field, FieldElem, FieldTagError, Scalar, common_field, elem, widen

Key = tuple[int, int, int]
Point = Sequence[Scalar]


def _orderings(key: Key) -> set[Key]:
    return set(permutations(key))


def multiplicity(key: Key) -> int:
    """Number of distinct orderings of a sorted index triple (1, 3 or 6)."""
    return len(_orderings(key))


@dataclass(frozen=True)
class CubicForm:
    m: int
    field: Field
    entries: tuple[tuple[Key, FieldElem], ...]

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("variable count must be non-negative")
        seen = set()
        for key, value in self.entries:
            if tuple(sorted(key)) != key or len(key) != 3:
                raise ValueError(f"tensor key {key} is not a sorted triple")
            if not all(0 <= i < self.m for i in key):
                raise ValueError(f"tensor key {key} out of range for m={self.m}")
            if key in seen:
                raise ValueError(f"duplicate tensor key {key}")
            seen.add(key)
            if value.field is not self.field:
                raise FieldTagError("coefficient field does not match the form")

    @classmethod
    def from_entries(
        cls, m: int, entries: Mapping[Iterable[int], Scalar] | Iterable, field: Field = Field.Q
    ) -> CubicForm:
        """Build a form from ``{(a, b, c): T_abc}`` with 0-based indices in any order.

        Repeated keys (after sorting) are rejected; zero values are dropped.
        """
        field = Field(field)
        items = entries.items() if isinstance(entries, Mapping) else entries
        tensor: dict[Key, FieldElem] = {}
        for key, value in items:
            k = tuple(sorted(int(i) for i in key))
            if len(k) != 3:
                raise ValueError(f"tensor key {key} must have three indices")
            if k in tensor:
                raise ValueError(f"tensor key {k} given twice")
            tensor[k] = elem(value, field)
        return cls._from_dict(m, field, tensor)

    @classmethod
    def _from_dict(cls, m: int, field: Field, tensor: Mapping[Key, FieldElem]) -> CubicForm:
        items = tuple(sorted((k, v) for k, v in tensor.items() if v))
        return cls(m, field, items)

    @classmethod
    def zero(cls, m: int, field: Field = Field.Q) -> CubicForm:
        return cls(m, Field(field), ())

    @property
    def tensor(self) -> dict[Key, FieldElem]:
        return dict(self.entries)

    def coefficient(self, a: int, b: int, c: int) -> FieldElem:
        return self.tensor.get(tuple(sorted((a, b, c))), FieldElem(0, 0, self.field))

    def widen(self, field: Field) -> CubicForm:
        field = Field(field)
        return CubicForm(self.m, field, tuple((k, widen(v, field)) for k, v in self.entries))

    def scale(self, c: Scalar) -> CubicForm:
        c = elem(c, self.field)
        return CubicForm._from_dict(self.m, self.field, {k: v * c for k, v in self.entries})

    def __call__(self, p: Point) -> FieldElem:
        return evaluate(self, p)

    def __add__(self, other: CubicForm) -> CubicForm:
        if self.m != other.m or self.field is not other.field:
            raise ValueError("forms must share variable count and field")
        t = self.tensor
        for k, v in other.entries:
            t[k] = t[k] + v if k in t else v
        return CubicForm._from_dict(self.m, self.field, t)


def _point(F: CubicForm, p: Point) -> list[FieldElem]:
    if len(p) != F.m:
        raise ValueError(f"point has {len(p)} coordinates, form has {F.m} variables")
    return [elem(x, F.field) for x in p]


def _zero(F: CubicForm) -> FieldElem:
    return FieldElem(0, 0, F.field)


def evaluate(F: CubicForm, p: Point) -> FieldElem:
    x = _point(F, p)
    total = _zero(F)
    for (a, b, c), t in F.entries:
        total += t * multiplicity((a, b, c)) * x[a] * x[b] * x[c]
    return total


def gradient(F: CubicForm, p: Point) -> list[FieldElem]:
    """``dF/dx_a = 3 * sum_{b,c} T[a, b, c] x_b x_c``."""
    x = _point(F, p)
    g = [_zero(F) for _ in range(F.m)]
    for key, t in F.entries:
        for a, b, c in _orderings(key):
            g[a] += 3 * t * x[b] * x[c]
    return g


@dataclass(frozen=True)
class LinearForm:
    coefficients: tuple[FieldElem, ...]

    @property
    def m(self) -> int:
        return len(self.coefficients)

    def __call__(self, p: Sequence[FieldElem]) -> FieldElem:
        if len(p) != self.m:
            raise ValueError("dimension mismatch")
        acc = None
        for c, x in zip(self.coefficients, p):
            acc = c * x if acc is None else acc + c * x
        return acc

    def support(self) -> dict[int, FieldElem]:
        return {i: c for i, c in enumerate(self.coefficients) if c}

    def __str__(self) -> str:
        return format_linear(self.support())


def format_linear(coeffs: Mapping[int, FieldElem], names: Sequence[str] | None = None) -> str:
    if not coeffs:
        return "0"
    parts = []
    for i in sorted(coeffs):
        name = names[i] if names else f"x_{i + 1}"
        c = coeffs[i]
        if c.is_rational():
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{c}*{name}")
        else:
            parts.append(f"({c})*{name}")
    return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class HessianForm:
    """Symmetric ``m x m`` matrix of linear forms, entry (j, k) = ``d^2 F / dx_j dx_k``."""

    entries: tuple[tuple[LinearForm, ...], ...]

    @property
    def m(self) -> int:
        return len(self.entries)

    def __getitem__(self, jk: tuple[int, int]) -> LinearForm:
        j, k = jk
        return self.entries[j][k]

    def at(self, p: Sequence[FieldElem]) -> list[list[FieldElem]]:
        return [[lf(p) for lf in row] for row in self.entries]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> list[list[LinearForm]]:
        return [[self.entries[r][c] for c in cols] for r in rows]


def hessian_sparse(F: CubicForm) -> dict[tuple[int, int], dict[int, FieldElem]]:
    """Hessian entries as sparse linear forms ``{(j, k): {c: coeff}}``; zero entries omitted."""
    H: dict[tuple[int, int], dict[int, FieldElem]] = {}
    for key, t in F.entries:
        for j, k, c in _orderings(key):
            lf = H.setdefault((j, k), {})
            lf[c] = lf[c] + 6 * t if c in lf else 6 * t
    return {jk: {c: v for c, v in lf.items() if v} for jk, lf in H.items()}


def hessian_form(F: CubicForm) -> HessianForm:
    sparse = hessian_sparse(F)
    z = _zero(F)
    rows = []
    for j in range(F.m):
        row = []
        for k in range(F.m):
            lf = sparse.get((j, k), {})
            row.append(LinearForm(tuple(lf.get(c, z) for c in range(F.m))))
        rows.append(tuple(row))
    return HessianForm(tuple(rows))


def hessian_at(F: CubicForm, p: Point) -> list[list[FieldElem]]:
    """The Hessian matrix evaluated at ``p``."""
    x = _point(F, p)
    H = [[_zero(F) for _ in range(F.m)] for _ in range(F.m)]
    for key, t in F.entries:
        for j, k, c in _orderings(key):
            if x[c]:
                H[j][k] += 6 * t * x[c]
    return H


def hessian_rank_at(F: CubicForm, p: Point) -> int:
    return linalg.rank(hessian_at(F, p))


def pullback(F: CubicForm, L: Sequence[Sequence[Scalar]]) -> CubicForm:
    """``x -> F(L x)`` for an ``m x n`` matrix ``L``; the result has ``n`` variables."""
    if len(L) != F.m:
        raise ValueError(f"matrix has {len(L)} rows, form has {F.m} variables")
    n = len(L[0]) if L else 0
    rows = [[elem(v, F.field) for v in row] for row in L]
    if any(len(r) != n for r in rows):
        raise ValueError("ragged matrix")
    nz = [{a: v for a, v in enumerate(row) if v} for row in rows]
    out: dict[Key, FieldElem] = {}
    for key, t in F.entries:
        for d, e, f in _orderings(key):
            for a, la in nz[d].items():
                for b, lb in nz[e].items():
                    if b < a:
                        continue
                    tab = t * la * lb
                    for c, lc in nz[f].items():
                        if c < b:
                            continue
                        k = (a, b, c)
                        out[k] = out[k] + tab * lc if k in out else tab * lc
    return CubicForm._from_dict(n, F.field, out)


def base_change(F: CubicForm, L: Sequence[Sequence[Scalar]]) -> CubicForm:
    """``F o L`` for an invertible square matrix ``L``."""
    M = [[elem(v, F.field) for v in row] for row in L]
    if len(M) != F.m or not linalg.is_invertible(M):
        raise ValueError("base change requires an invertible m x m matrix")
    return pullback(F, M)


def _shift(F: CubicForm, offset: int) -> dict[Key, FieldElem]:
    return {tuple(i + offset for i in k): v for k, v in F.entries}


def blowup_point(F: CubicForm, a: Scalar) -> CubicForm:
    """Cubic ``a*x0^3 + F(x1..xm)`` of a point blow-up; ``a`` is the new E^3."""
    a = elem(a, F.field)
    if not a:
        raise ValueError("exceptional self-intersection E^3 must be nonzero")
    t = _shift(F, 1)
    t[(0, 0, 0)] = a
    return CubicForm._from_dict(F.m + 1, F.field, t)


def blowup_curve(F: CubicForm, a: Scalar, b: Sequence[Scalar]) -> CubicForm:
    """Cubic ``a*x0^3 + 3*sum b_i x0^2 x_i + F(x1..xm)`` of a curve blow-up.

    ``a = E^3`` and ``b_i = E^2 . f*gamma_i``.
    """
    if len(b) != F.m:
        raise ValueError(f"need {F.m} values of b, got {len(b)}")
    t = _shift(F, 1)
    t[(0, 0, 0)] = elem(a, F.field)
    for i, bi in enumerate(b, start=1):
        t[(0, 0, i)] = elem(bi, F.field)
    return CubicForm._from_dict(F.m + 1, F.field, t)


def direct_sum_with_cubes(F: CubicForm, a: Sequence[Scalar]) -> CubicForm:
    """``F(x) + sum a_i y_i^3`` with the ``y`` variables appended after ``x``."""
    t = dict(F.entries)
    for i, ai in enumerate(a):
        ai = elem(ai, F.field)
        if not ai:
            raise ValueError(f"exceptional self-intersection a_{i + 1} = E^3 must be nonzero")
        j = F.m + i
        t[(j, j, j)] = ai
    return CubicForm._from_dict(F.m + len(a), F.field, t)


def point_field(p: Point) -> Field:
    return common_field(p)
