"""Exterior algebra of a complex 3-torus and its cubic form on H^2.

Generators are ``dz1, dz2, dz3, dzb1, dzb2, dzb3`` (``b`` marks a conjugate
differential) in that reference order.  The top form
``dz1^dz2^dz3^dzb1^dzb2^dzb3`` integrates to 1, so every triple product of
basis 2-forms is -1, 0 or +1.

The public coordinate convention on H^2 is :data:`H2_LABELS`::

    z12, z13, z23,
    z1b1, z1b2, z1b3, z2b1, z2b2, z2b3, z3b1, z3b2, z3b3,
    zb1b2, zb1b3, zb2b3

where ``z1b2`` is ``dz1 ^ dzb2`` and ``zb1b2`` is ``dzb1 ^ dzb2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Hashable, Sequence

DIM = 3


def sort_sign(keys: Sequence[Hashable]) -> tuple[int, tuple]:
    """Sort ``keys`` and return ``(sign, sorted_keys)``.

    ``sign`` is the parity of the sorting permutation, or 0 when a key
    repeats.  Works for any number of totally ordered keys.
    """
    keys = list(keys)
    if len(set(keys)) != len(keys):
        return 0, tuple(sorted(keys))
    inversions = sum(
        1 for i in range(len(keys)) for j in range(i + 1, len(keys)) if keys[i] > keys[j]
    )
    return (-1 if inversions % 2 else 1), tuple(sorted(keys))


@dataclass(frozen=True)
class Generator:
    index: int
    barred: bool = False

    def __post_init__(self):
        if not 1 <= self.index <= DIM:
            raise ValueError(f"generator index must be in 1..{DIM}, got {self.index}")

    @property
    def key(self) -> tuple[bool, int]:
        return (self.barred, self.index)

    def __lt__(self, other: Generator) -> bool:
        return self.key < other.key

    def __gt__(self, other: Generator) -> bool:
        return self.key > other.key

    def __str__(self) -> str:
        return f"dz{'b' if self.barred else ''}{self.index}"

    def monomial(self) -> WedgeMonomial:
        return WedgeMonomial((self,), 1)


@dataclass(frozen=True)
class WedgeMonomial:
    """``sign * f1 ^ f2 ^ ...`` with factors in canonical order.

    ``sign == 0`` is the zero monomial; its factors are kept empty.
    """

    factors: tuple[Generator, ...]
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or 1")
        if self.sign == 0:
            object.__setattr__(self, "factors", ())
            return
        s, ordered = sort_sign(self.factors)
        if s == 0:
            object.__setattr__(self, "factors", ())
            object.__setattr__(self, "sign", 0)
        else:
            object.__setattr__(self, "factors", ordered)
            object.__setattr__(self, "sign", self.sign * s)

    @classmethod
    def zero(cls) -> WedgeMonomial:
        return cls((), 0)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    @property
    def degree(self) -> int:
        return len(self.factors)

    def __neg__(self) -> WedgeMonomial:
        return WedgeMonomial(self.factors, -self.sign)

    def __xor__(self, other: WedgeMonomial) -> WedgeMonomial:
        return wedge(self, other)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        body = "^".join(str(g) for g in self.factors) or "1"
        return ("-" if self.sign < 0 else "") + body


def wedge(m1: WedgeMonomial, m2: WedgeMonomial) -> WedgeMonomial:
    if m1.is_zero or m2.is_zero:
        return WedgeMonomial.zero()
    return WedgeMonomial(m1.factors + m2.factors, m1.sign * m2.sign)


def dz(i: int) -> WedgeMonomial:
    return Generator(i, False).monomial()


def dzb(i: int) -> WedgeMonomial:
    return Generator(i, True).monomial()


def _label(g: Generator, h: Generator) -> str:
    return "z" + str(g)[2:] + str(h)[2:]


def _build_basis() -> tuple[tuple[WedgeMonomial, ...], tuple[str, ...]]:
    hol = [Generator(i) for i in range(1, DIM + 1)]
    anti = [Generator(i, True) for i in range(1, DIM + 1)]
    pairs = list(combinations(hol, 2))
    pairs += [(g, h) for g in hol for h in anti]
    pairs += list(combinations(anti, 2))
    basis = tuple(WedgeMonomial((g, h)) for g, h in pairs)
    labels = tuple(_label(g, h) for g, h in pairs)
    return basis, labels


H2_BASIS, H2_LABELS = _build_basis()
H2_DIM = len(H2_BASIS)
TOP_FORM = WedgeMonomial(
    tuple(Generator(i) for i in range(1, DIM + 1))
    + tuple(Generator(i, True) for i in range(1, DIM + 1))
)

_LABEL_INDEX = {lab: n for n, lab in enumerate(H2_LABELS)}


def basis_index(label: str) -> int:
    """0-based position of a basis label such as ``"z3b1"``."""
    try:
        return _LABEL_INDEX[label]
    except KeyError:
        raise ValueError(f"unknown H^2 basis label {label!r}") from None


def is_mixed(index: int) -> bool:
    """True for the ``dz_i ^ dzb_j`` classes."""
    g, h = H2_BASIS[index].factors
    return not g.barred and h.barred


def triple_product(a: int, b: int, c: int) -> int:
    """Integral of ``gamma_a ^ gamma_b ^ gamma_c`` over the torus (0-based indices)."""
    prod = wedge(wedge(H2_BASIS[a], H2_BASIS[b]), H2_BASIS[c])
    if prod.is_zero:
        return 0
    return prod.sign


@lru_cache(maxsize=1)
def abelian_cubic():
    """The cubic form of the abelian threefold in the 15 coordinates of :data:`H2_LABELS`."""
    from .cubic import CubicForm

    entries = {}
    for a in range(H2_DIM):
        for b in range(a, H2_DIM):
            for c in range(b, H2_DIM):
                t = triple_product(a, b, c)
                if t:
                    entries[(a, b, c)] = t
    return CubicForm.from_entries(H2_DIM, entries)
