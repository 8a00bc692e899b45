"""Exact cubic forms of threefolds, Hessian rank strata and blow-down obstructions."""

__version__ = "0.1.0"

from .cubic import (
    CubicForm,
    HessianForm,
    LinearForm,
    base_change,
    blowup_curve,
    blowup_point,
    direct_sum_with_cubes,
    evaluate,
    gradient,
    hessian_at,
    hessian_form,
    hessian_rank_at,
    pullback,
)
from .exterior import H2_LABELS, abelian_cubic, basis_index, triple_product, wedge
from .field import I, OMEGA, Field, FieldElem, widen
from .obstruct import (
    CandidateKind,
    CertifyStatus,
    RankCertificate,
    ResolutionModel,
    Verdict,
    VerdictStatus,
    block_rank,
    certify_rank1_trivial,
    classify_candidate,
    decide_blowdown_obstruction,
    replay_certificate,
)
from .quotient import DiagonalAction, induced_action_on_h2, invariant_subspace, quotient_cubic
