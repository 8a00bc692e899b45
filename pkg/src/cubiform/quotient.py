"""Cyclic diagonal actions on the abelian threefold and the quotient cubic."""

from __future__ import annotations

from dataclasses import dataclass

from .cubic import CubicForm, pullback
from .exterior import H2_BASIS, H2_DIM, H2_LABELS, abelian_cubic
from .field import OMEGA, Field, FieldElem, I, elem

# roots of unity in Q(i) and Q(omega) have order at most 6
_MAX_ORDER = 12

ZETA_LABELS = {
    "1": FieldElem(1),
    "-1": FieldElem(-1),
    "i": I,
    "-omega": -OMEGA,
}


def _root_order(zeta: FieldElem) -> int | None:
    power = zeta
    for j in range(1, _MAX_ORDER + 1):
        if power == 1:
            return j
        power = power * zeta
    return None


@dataclass(frozen=True)
class DiagonalAction:
    """Cyclic group acting on ``(z1, z2, z3)`` by multiplying each coordinate by ``zeta``."""

    zeta: FieldElem
    order: int

    def __post_init__(self):
        true_order = _root_order(self.zeta)
        if true_order is None:
            raise ValueError(f"{self.zeta} is not a root of unity")
        if true_order != self.order:
            raise ValueError(f"{self.zeta} has order {true_order}, not {self.order}")

    @classmethod
    def from_zeta(cls, zeta: FieldElem) -> DiagonalAction:
        order = _root_order(zeta)
        if order is None:
            raise ValueError(f"{zeta} is not a root of unity")
        return cls(zeta, order)

    @classmethod
    def from_label(cls, label: str) -> DiagonalAction:
        try:
            return cls.from_zeta(ZETA_LABELS[label])
        except KeyError:
            raise ValueError(
                f"unknown zeta {label!r}; expected one of {', '.join(ZETA_LABELS)}"
            ) from None

    @property
    def field(self) -> Field:
        return self.zeta.field

    def power(self, j: int) -> DiagonalAction:
        return DiagonalAction.from_zeta(self.zeta**j)


def h2_eigenvalues(act: DiagonalAction) -> tuple[FieldElem, ...]:
    """Eigenvalue of the induced action on each basis class of H^2.

    ``dz_i`` scales by ``zeta`` and ``dzb_i`` by its conjugate.
    """
    z, zb = act.zeta, act.zeta.conjugate()
    out = []
    for mono in H2_BASIS:
        value = elem(1, act.field)
        for g in mono.factors:
            value = value * (zb if g.barred else z)
        out.append(value)
    return tuple(out)


def induced_action_on_h2(act: DiagonalAction) -> list[list[FieldElem]]:
    eig = h2_eigenvalues(act)
    zero = elem(0, act.field)
    return [[eig[i] if i == j else zero for j in range(H2_DIM)] for i in range(H2_DIM)]


@dataclass(frozen=True)
class InvariantInclusion:
    """Inclusion of the invariant subspace, spanned by the listed basis classes."""

    indices: tuple[int, ...]

    @property
    def sub_dim(self) -> int:
        return len(self.indices)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(H2_LABELS[i] for i in self.indices)

    @property
    def matrix(self) -> list[list[int]]:
        """``15 x sub_dim`` 0/1 matrix whose columns are the chosen basis vectors."""
        return [[int(i == j) for j in self.indices] for i in range(H2_DIM)]


def invariant_subspace(act: DiagonalAction) -> InvariantInclusion:
    eig = h2_eigenvalues(act)
    return InvariantInclusion(tuple(i for i, e in enumerate(eig) if e == 1))


def quotient_cubic(act: DiagonalAction) -> CubicForm:
    """Cubic form of ``A/G``: the group order times the restriction of the abelian cubic."""
    inc = invariant_subspace(act)
    return pullback(abelian_cubic(), inc.matrix).scale(act.order)
