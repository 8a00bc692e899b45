"""Rank-one certificates, candidate classification and the blow-down verdict.

The prover shows that the Hessian of a cubic has rank at least 2 at every
nonzero point.  Rank at most 1 means every 2x2 minor vanishes, and each
minor is a quadratic polynomial in the coordinates.  A minor that reduces,
after setting the variables already known to vanish to zero, to
``c * x_a^2`` with ``c != 0`` forces ``x_a = 0``.  Repeating this until no
new variable appears gives the squares-only closure; a minor reducing to
``c * x_a * x_b`` splits the argument into two branches.

Variables are 0-based in Python and printed 1-based (``x_1 ... x_m``).
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Sequence, Union

from .cubic import CubicForm, Point, direct_sum_with_cubes, hessian_rank_at, hessian_sparse
from .field import Field, FieldElem, elem, widen

Pair = tuple[int, int]
Linear = dict[int, FieldElem]
Quadratic = dict[Pair, FieldElem]

DEFAULT_MAX_DEPTH = 4


class CertificateError(ValueError):
    """A certificate failed to replay against the form it claims to describe."""


# -- certificate data ------------------------------------------------------


@dataclass(frozen=True)
class SquareStep:
    rows: Pair
    cols: Pair
    known_zeros_before: tuple[int, ...]
    coefficient: FieldElem
    variable: int

    @property
    def reduced_form(self) -> str:
        return f"{self.coefficient}*x_{self.variable + 1}^2"

    @property
    def conclusion(self) -> str:
        return f"x_{self.variable + 1}=0"


@dataclass(frozen=True)
class BranchStep:
    """Minor ``c * x_a * x_b``: one sub-certificate assumes ``x_a = 0``, the other ``x_b = 0``."""

    rows: Pair
    cols: Pair
    known_zeros_before: tuple[int, ...]
    coefficient: FieldElem
    variables: Pair
    branches: tuple[RankCertificate, RankCertificate]

    @property
    def reduced_form(self) -> str:
        a, b = self.variables
        return f"{self.coefficient}*x_{a + 1}*x_{b + 1}"


Step = Union[SquareStep, BranchStep]


@dataclass(frozen=True)
class RankCertificate:
    m: int
    steps: tuple[Step, ...]

    @property
    def uses_branching(self) -> bool:
        return any(isinstance(s, BranchStep) for s in self.steps)

    def eliminated(self) -> list[int]:
        """Variables forced to zero by the square steps on the trunk, in order."""
        return [s.variable for s in self.steps if isinstance(s, SquareStep)]


class CertifyStatus(str, Enum):
    CERTIFIED = "CERTIFIED"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class CertifyResult:
    status: CertifyStatus
    certificate: RankCertificate | None = None
    counterexample: tuple[FieldElem, ...] | None = None

    def __bool__(self) -> bool:
        return self.status is CertifyStatus.CERTIFIED


# -- minor arithmetic ------------------------------------------------------


def _restrict(lf: Linear, zeros) -> Linear:
    return {c: v for c, v in lf.items() if c not in zeros}


def _mul(l1: Linear, l2: Linear, out: Quadratic, sign: int) -> None:
    for i, a in l1.items():
        for j, b in l2.items():
            key = (i, j) if i <= j else (j, i)
            term = a * b if sign > 0 else -(a * b)
            out[key] = out[key] + term if key in out else term


def minor_polynomial(H, rows: Pair, cols: Pair, zeros=frozenset()) -> Quadratic:
    """The 2x2 minor as a quadratic ``{(i, j): coeff}`` with ``zeros`` set to 0.

    ``H`` is the sparse Hessian from :func:`cubiform.cubic.hessian_sparse`.
    """
    (r1, r2), (c1, c2) = rows, cols
    empty: Linear = {}
    h11 = _restrict(H.get((r1, c1), empty), zeros)
    h22 = _restrict(H.get((r2, c2), empty), zeros)
    h12 = _restrict(H.get((r1, c2), empty), zeros)
    h21 = _restrict(H.get((r2, c1), empty), zeros)
    out: Quadratic = {}
    if h11 and h22:
        _mul(h11, h22, out, 1)
    if h12 and h21:
        _mul(h12, h21, out, -1)
    return {k: v for k, v in out.items() if v}


def _single_term(q: Quadratic):
    if len(q) != 1:
        return None
    ((key, coeff),) = q.items()
    return key, coeff


def _scan(F: CubicForm, zeros: frozenset, row_pairs: Sequence[Pair], want: str):
    """Eligible minors among ``row_pairs x all column pairs`` in lexicographic order.

    ``want == "square"``: ``{variable: (rows, cols, coeff)}`` keeping the first
    minor per variable.  ``want == "product"``: the first product-type minor or None.
    """
    H = hessian_sparse(F)
    col_pairs = list(combinations(range(F.m), 2))
    found: dict[int, tuple] = {}
    for rows in row_pairs:
        if not (any((rows[0], c) in H for c in range(F.m)) and any((rows[1], c) in H for c in range(F.m))):
            continue
        for cols in col_pairs:
            term = _single_term(minor_polynomial(H, rows, cols, zeros))
            if term is None:
                continue
            (i, j), coeff = term
            if want == "square":
                if i == j and i not in found:
                    found[i] = (rows, cols, coeff)
            elif i != j:
                return (rows, cols, coeff, (i, j))
    return found if want == "square" else None


def _scan_job(args):
    return _scan(*args)


def _chunks(items: list, n: int) -> list[list]:
    size = max(1, -(-len(items) // n))
    return [items[i : i + size] for i in range(0, len(items), size)]


class _Prover:
    def __init__(self, F: CubicForm, max_depth: int, workers: int):
        self.F = F
        self.max_depth = max_depth
        self.workers = max(1, workers)
        self.row_pairs = list(combinations(range(F.m), 2))
        self.pool = None
        self._probe_cache: dict[int, bool] = {}

    def __enter__(self):
        if self.workers > 1 and len(self.row_pairs) > 1:
            self.pool = ProcessPoolExecutor(self.workers)
        return self

    def __exit__(self, *exc):
        if self.pool is not None:
            self.pool.shutdown()

    def scan(self, zeros: frozenset, want: str):
        if self.pool is None:
            return _scan(self.F, zeros, self.row_pairs, want)
        jobs = [(self.F, zeros, chunk, want) for chunk in _chunks(self.row_pairs, self.workers)]
        results = list(self.pool.map(_scan_job, jobs))
        # chunks are contiguous in lexicographic order, so earlier chunks win ties
        if want == "square":
            merged: dict[int, tuple] = {}
            for part in results:
                for var, hit in part.items():
                    merged.setdefault(var, hit)
            return merged
        return next((r for r in results if r is not None), None)

    def probe(self, zeros: frozenset):
        """Unit vectors outside ``zeros`` whose Hessian has rank <= 1."""
        for i in range(self.F.m):
            if i in zeros:
                continue
            if i not in self._probe_cache:
                e = [0] * self.F.m
                e[i] = 1
                self._probe_cache[i] = hessian_rank_at(self.F, e) <= 1
            if self._probe_cache[i]:
                e = [elem(int(j == i), self.F.field) for j in range(self.F.m)]
                return tuple(e)
        return None

    def prove(self, zeros: frozenset, depth: int):
        """Return ``(steps, counterexample)``; ``steps`` is None when the search fails."""
        steps: list[Step] = []
        while len(zeros) < self.F.m:
            found = self.scan(zeros, "square")
            if not found:
                break
            before = tuple(sorted(zeros))
            hits = sorted(found.items(), key=lambda kv: (kv[1][0], kv[1][1]))
            for var, (rows, cols, coeff) in hits:
                steps.append(SquareStep(rows, cols, before, coeff, var))
            zeros = zeros | set(found)
        if len(zeros) == self.F.m:
            return steps, None
        cex = self.probe(zeros)
        if cex is not None:
            return None, cex
        if depth <= 0:
            return None, None
        hit = self.scan(zeros, "product")
        if hit is None:
            return None, None
        rows, cols, coeff, (a, b) = hit
        subs = []
        for var in (a, b):
            sub, cex = self.prove(zeros | {var}, depth - 1)
            if sub is None:
                return None, cex
            subs.append(RankCertificate(self.F.m, tuple(sub)))
        steps.append(BranchStep(rows, cols, tuple(sorted(zeros)), coeff, (a, b), tuple(subs)))
        return steps, None


def default_workers() -> int:
    env = os.environ.get("CUBIFORM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def certify_rank1_trivial(
    F: CubicForm, max_depth: int = DEFAULT_MAX_DEPTH, workers: int = 1
) -> CertifyResult:
    """Try to prove that the only point where the Hessian of ``F`` has rank <= 1 is 0.

    Returns a certificate, a nonzero counterexample point, or an
    inconclusive result once the branch depth is exhausted.  The output does
    not depend on ``workers``.
    """
    if F.m == 0:
        return CertifyResult(CertifyStatus.CERTIFIED, RankCertificate(0, ()))
    with _Prover(F, max_depth, workers) as prover:
        steps, cex = prover.prove(frozenset(), max_depth)
    if steps is not None:
        return CertifyResult(CertifyStatus.CERTIFIED, RankCertificate(F.m, tuple(steps)))
    if cex is not None:
        return CertifyResult(CertifyStatus.COUNTEREXAMPLE, counterexample=cex)
    return CertifyResult(CertifyStatus.INCONCLUSIVE)


def _same(coeff: FieldElem, value: FieldElem, field: Field) -> bool:
    try:
        return widen(coeff, field) == value
    except ValueError:
        return False


def replay_certificate(F: CubicForm, cert: RankCertificate) -> None:
    """Recompute every minor of ``cert`` from ``F``; raise :class:`CertificateError` on any mismatch."""
    if cert.m != F.m:
        raise CertificateError(f"certificate is for {cert.m} variables, form has {F.m}")
    _replay(F, hessian_sparse(F), cert, frozenset())


def _check_pairs(step: Step, m: int) -> None:
    for a, b in (step.rows, step.cols):
        if not 0 <= a < b < m:
            raise CertificateError(f"invalid index pair {(a, b)}")


def _replay(F: CubicForm, H, cert: RankCertificate, zeros: frozenset) -> None:
    for n, step in enumerate(cert.steps):
        _check_pairs(step, F.m)
        before = frozenset(step.known_zeros_before)
        if not before <= zeros:
            extra = sorted(v + 1 for v in before - zeros)
            raise CertificateError(f"step {n + 1} assumes x_{extra} = 0 before it is derived")
        q = minor_polynomial(H, step.rows, step.cols, before)
        term = _single_term(q)
        if term is None:
            raise CertificateError(f"step {n + 1}: minor does not reduce to a single monomial")
        (i, j), coeff = term
        if not _same(step.coefficient, coeff, F.field) or not coeff:
            raise CertificateError(f"step {n + 1}: coefficient {step.coefficient} != {coeff}")
        if isinstance(step, SquareStep):
            if not (i == j == step.variable):
                raise CertificateError(f"step {n + 1}: minor is not c*x_{step.variable + 1}^2")
            zeros = zeros | {step.variable}
            continue
        if n != len(cert.steps) - 1:
            raise CertificateError("a branch must be the last step of its certificate")
        a, b = step.variables
        if a == b or (min(a, b), max(a, b)) != (i, j):
            raise CertificateError(f"step {n + 1}: minor is not c*x_{a + 1}*x_{b + 1}")
        for var, sub in zip((a, b), step.branches):
            if sub.m != F.m:
                raise CertificateError("branch certificate has the wrong size")
            _replay(F, H, sub, zeros | {var})
        return
    if len(zeros) != F.m:
        missing = sorted(set(range(F.m)) - zeros)
        raise CertificateError(f"variables {[v + 1 for v in missing]} are not forced to zero")


def is_valid_certificate(F: CubicForm, cert: RankCertificate) -> bool:
    try:
        replay_certificate(F, cert)
    except CertificateError:
        return False
    return True


# -- resolution models -----------------------------------------------------


@dataclass(frozen=True)
class ResolutionModel:
    """Quotient cubic ``F_Z`` together with the self-intersections ``a_i = E_i^3``."""

    F_Z: CubicForm
    a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        if len(self.a) < 1:
            raise ValueError("a resolution model needs at least one exceptional divisor")
        for i, ai in enumerate(self.a):
            if isinstance(ai, bool) or not isinstance(ai, int):
                raise ValueError(f"a_{i + 1} must be an integer")
            if ai == 0:
                raise ValueError(f"a_{i + 1} = E_{i + 1}^3 must be a nonzero integer")

    @property
    def k(self) -> int:
        return len(self.a)

    @property
    def m(self) -> int:
        return self.F_Z.m

    @property
    def form(self) -> CubicForm:
        """``F_X = F_Z + sum a_i y_i^3``."""
        return direct_sum_with_cubes(self.F_Z, self.a)

    def widen(self, field: Field) -> ResolutionModel:
        return ResolutionModel(self.F_Z.widen(field), self.a)


@dataclass(frozen=True)
class BlockRank:
    rank0: int
    support: frozenset[int]
    total: int


def _split(model: ResolutionModel, p: Point) -> tuple[list, list]:
    if len(p) != model.m + model.k:
        raise ValueError(f"point has {len(p)} coordinates, model has {model.m + model.k}")
    pts = [elem(x, model.F_Z.field) for x in p]
    return pts[: model.m], pts[model.m :]


def block_rank(model: ResolutionModel, p: Point) -> BlockRank:
    """Hessian rank of ``F_X`` at ``p = (p0; p1)`` from its two diagonal blocks.

    ``support`` holds the 0-based exceptional indices with ``p1_i != 0``.
    """
    p0, p1 = _split(model, p)
    rank0 = hessian_rank_at(model.F_Z, p0) if model.m else 0
    support = frozenset(i for i, y in enumerate(p1) if y)
    return BlockRank(rank0, support, rank0 + len(support))


class CandidateKind(str, Enum):
    PULLBACK = "PULLBACK"
    EXCEPTIONAL_COMBINATION = "EXCEPTIONAL_COMBINATION"
    NOT_RANK_LE_2 = "NOT_RANK_LE_2"


@dataclass(frozen=True)
class CandidateClassification:
    kind: CandidateKind
    rank0: int
    support: frozenset[int]
    total: int


def classify_candidate(
    model: ResolutionModel, p: Point, cert: RankCertificate
) -> CandidateClassification:
    """Sort a nonzero class by its Hessian rank, as a candidate exceptional divisor."""
    replay_certificate(model.F_Z, cert)
    p0, p1 = _split(model, p)
    if not any(p0) and not any(p1):
        raise ValueError("the zero class is not a candidate")
    br = block_rank(model, p)
    if br.total > 2:
        kind = CandidateKind.NOT_RANK_LE_2
    elif br.rank0 == 2:
        kind = CandidateKind.PULLBACK
    else:
        if any(p0):
            raise CertificateError("point with rank <= 1 on F_Z contradicts the certificate")
        kind = CandidateKind.EXCEPTIONAL_COMBINATION
    return CandidateClassification(kind, br.rank0, br.support, br.total)


# -- verdict -----------------------------------------------------------------

RESIDUAL_ASSUMPTIONS = (
    "pullback case: a class numerically equal to f^*D with D pseudo-effective on Z "
    "is nef, since its pullback to the abelian threefold is nef; a nef class cannot "
    "be an exceptional divisor",
    "exceptional case: by the negativity lemma each E_s is covered by curves C with "
    "E_s.C < 0, so a prime exceptional divisor with positive coefficient on E_s must "
    "contain E_s and hence equal it",
    "Z is Q-factorial, so E_s is contracted to a point; that contraction recovers the "
    "singular point of Z, so the target of the blow-down is not smooth",
    "the exceptional divisor E is prime, effective and nonzero",
    "the quotient map A -> Z is etale in codimension 2 and has degree equal to the "
    "group order",
    "the resolution blows up each singular point of Z once, with irreducible "
    "exceptional divisors E_i satisfying E_i^3 = a_i",
)


class VerdictStatus(str, Enum):
    OBSTRUCTED = "OBSTRUCTED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Verdict:
    status: VerdictStatus
    certificate: RankCertificate | None
    residual_assumptions: tuple[str, ...] = RESIDUAL_ASSUMPTIONS
    counterexample: tuple[FieldElem, ...] | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.status is VerdictStatus.OBSTRUCTED and self.certificate is None:
            raise ValueError("an OBSTRUCTED verdict needs a rank certificate")


def decide_blowdown_obstruction(
    model: ResolutionModel, max_depth: int = DEFAULT_MAX_DEPTH, workers: int = 1
) -> Verdict:
    """OBSTRUCTED when the rank <= 1 locus of ``F_Z`` is certified to be the origin.

    In that case every class of ``F_X`` with Hessian rank <= 2, the necessary
    condition for the exceptional divisor of a smooth blow-up, is either a
    pullback from ``Z`` or supported on at most two of the ``E_i``; the
    remaining geometric steps are listed in ``residual_assumptions``.
    """
    result = certify_rank1_trivial(model.F_Z, max_depth=max_depth, workers=workers)
    if result.status is CertifyStatus.CERTIFIED:
        return Verdict(VerdictStatus.OBSTRUCTED, result.certificate)
    if result.status is CertifyStatus.COUNTEREXAMPLE:
        note = "F_Z has a nonzero point with Hessian rank <= 1"
        return Verdict(VerdictStatus.INCONCLUSIVE, None, counterexample=result.counterexample, notes=(note,))
    note = f"no certificate found within branch depth {max_depth}"
    return Verdict(VerdictStatus.INCONCLUSIVE, None, notes=(note,))


def full_rank_check(model: ResolutionModel, p: Point) -> int:
    """Hessian rank of ``F_X`` at ``p`` by direct elimination on the full matrix."""
    return hessian_rank_at(model.form, [elem(x, model.F_Z.field) for x in p])
