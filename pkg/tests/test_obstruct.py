from dataclasses import replace

import pytest
import sympy

from cubiform.cubic import CubicForm, hessian_rank_at, hessian_sparse
from cubiform.exterior import abelian_cubic
from cubiform.field import Field, FieldElem
from cubiform.obstruct import (
    RESIDUAL_ASSUMPTIONS,
    BranchStep,
    CandidateKind,
    CertificateError,
    CertifyStatus,
    RankCertificate,
    ResolutionModel,
    SquareStep,
    VerdictStatus,
    block_rank,
    certify_rank1_trivial,
    classify_candidate,
    decide_blowdown_obstruction,
    full_rank_check,
    is_valid_certificate,
    minor_polynomial,
    replay_certificate,
)
from cubiform.quotient import DiagonalAction, quotient_cubic
from conftest import random_form, random_point


def x4():
    return quotient_cubic(DiagonalAction.from_label("i"))


def x6():
    return quotient_cubic(DiagonalAction.from_label("-omega"))


def sympy_minor(F, rows, cols, zeros=()):
    """Independent recomputation of a 2x2 Hessian minor with sympy."""
    xs = sympy.symbols(f"x0:{F.m}")
    poly = 0
    for (a, b, c), v in F.entries:
        mult = len({(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)})
        poly += int(v.a) * mult * xs[a] * xs[b] * xs[c]
    H = sympy.hessian(poly, xs)
    det = H.extract(list(rows), list(cols)).det()
    return sympy.expand(det.subs({xs[z]: 0 for z in zeros})), xs


def test_abelian_certificate_squares_only():
    F = abelian_cubic()
    result = certify_rank1_trivial(F)
    assert result.status is CertifyStatus.CERTIFIED
    cert = result.certificate
    assert not cert.uses_branching
    assert sorted(cert.eliminated()) == list(range(15))
    replay_certificate(F, cert)


def test_certificate_steps_recomputed_by_sympy():
    F = abelian_cubic()
    cert = certify_rank1_trivial(F).certificate
    for step in cert.steps:
        det, xs = sympy_minor(F, step.rows, step.cols, step.known_zeros_before)
        assert det == int(step.coefficient.a) * xs[step.variable] ** 2


def test_x4_certificate_has_nine_steps():
    cert = certify_rank1_trivial(x4()).certificate
    assert len(cert.steps) == 9
    assert sorted(cert.eliminated()) == list(range(9))


def test_counterexamples():
    cube = CubicForm.from_entries(1, {(0, 0, 0): 1})
    r = certify_rank1_trivial(cube)
    assert r.status is CertifyStatus.COUNTEREXAMPLE
    assert r.counterexample == (1,)
    two = CubicForm.from_entries(2, {(0, 0, 0): 1, (1, 1, 1): 1})
    r = certify_rank1_trivial(two)
    assert r.status is CertifyStatus.COUNTEREXAMPLE
    assert r.counterexample == (1, 0)
    assert hessian_rank_at(two, list(r.counterexample)) <= 1


def test_inconclusive_on_zero_form():
    r = certify_rank1_trivial(CubicForm.zero(0))
    assert r.status is CertifyStatus.CERTIFIED
    # the zero form in 2 variables has rank 0 everywhere, found by probing
    r = certify_rank1_trivial(CubicForm.zero(2))
    assert r.status is CertifyStatus.COUNTEREXAMPLE


def _branching_form():
    # x0^3 - 3 x0^2 x1 - 3 x1^2 x2 + x2^3: squares-only closure stalls, one branch is needed
    return CubicForm.from_entries(3, {(0, 0, 0): 1, (0, 0, 1): -1, (1, 1, 2): -1, (2, 2, 2): 1})


def _origin_only_by_groebner(F):
    """Oracle: every variable lies in the radical of the ideal of 2x2 Hessian minors."""
    from itertools import combinations

    xs = sympy.symbols(f"x0:{F.m}")
    minors = []
    for rows in combinations(range(F.m), 2):
        for cols in combinations(range(F.m), 2):
            det, _ = sympy_minor(F, rows, cols)  # same symbol names as xs
            if det != 0:
                minors.append(det)
    G = sympy.groebner(minors, *xs, order="grevlex")
    return all(any(G.reduce(x**n)[1] == 0 for n in range(1, 6)) for x in xs)


def test_branching_certificate():
    F = _branching_form()
    r = certify_rank1_trivial(F)
    assert r.status is CertifyStatus.CERTIFIED
    assert r.certificate.uses_branching
    branch = r.certificate.steps[-1]
    assert isinstance(branch, BranchStep)
    replay_certificate(F, r.certificate)
    assert _origin_only_by_groebner(F)


def test_branching_respects_depth_limit():
    r = certify_rank1_trivial(_branching_form(), max_depth=0)
    assert r.status is CertifyStatus.INCONCLUSIVE


def test_tampered_branch_is_detected():
    F = _branching_form()
    cert = certify_rank1_trivial(F).certificate
    branch = cert.steps[-1]
    swapped = replace(branch, branches=(branch.branches[1], branch.branches[0]))
    bad = RankCertificate(F.m, cert.steps[:-1] + (swapped,))
    if branch.branches[0] != branch.branches[1]:
        assert not is_valid_certificate(F, bad)
    truncated = replace(branch, branches=(branch.branches[0], RankCertificate(F.m, ())))
    assert not is_valid_certificate(F, RankCertificate(F.m, cert.steps[:-1] + (truncated,)))


def test_xyz_certified_by_squares():
    F = CubicForm.from_entries(3, {(0, 1, 2): 1})
    r = certify_rank1_trivial(F)
    assert r.status is CertifyStatus.CERTIFIED and not r.certificate.uses_branching
    assert _origin_only_by_groebner(F)


def test_incomplete_certificate_rejected():
    F = CubicForm.from_entries(2, {(0, 0, 1): 1})  # 3 x0^2 x1: Hessian [[6x1, 6x0], [6x0, 0]]
    H = hessian_sparse(F)
    assert minor_polynomial(H, (0, 1), (0, 1)) == {(0, 0): FieldElem(-36)}
    good = RankCertificate(2, (SquareStep((0, 1), (0, 1), (), FieldElem(-36), 0),))
    # x0 = 0 leaves 6*x1 in position (0,0); no 2x2 minor sees it, so the certificate is incomplete
    with pytest.raises(CertificateError):
        replay_certificate(F, good)
    r = certify_rank1_trivial(F)
    assert r.status is CertifyStatus.COUNTEREXAMPLE
    assert r.counterexample == (0, 1)


def test_tampering_is_detected():
    F = abelian_cubic()
    cert = certify_rank1_trivial(F).certificate
    assert is_valid_certificate(F, cert)
    s0 = cert.steps[0]
    tampered = [
        replace(s0, coefficient=FieldElem(35)),
        replace(s0, variable=(s0.variable + 1) % 15),
        replace(s0, cols=(s0.cols[0], s0.cols[1] - 1)),
        replace(s0, known_zeros_before=(3,)),
    ]
    for bad in tampered:
        steps = (bad,) + cert.steps[1:]
        assert not is_valid_certificate(F, RankCertificate(15, steps))
    assert not is_valid_certificate(F, RankCertificate(15, cert.steps[:-1]))
    assert not is_valid_certificate(F, RankCertificate(14, cert.steps))
    assert not is_valid_certificate(x4(), RankCertificate(9, cert.steps[:9]))


def test_branch_step_must_be_last():
    F = CubicForm.from_entries(3, {(0, 1, 2): 1})
    sub = RankCertificate(3, ())
    br = BranchStep((0, 1), (0, 1), (), FieldElem(-36), (0, 1), (sub, sub))
    with pytest.raises(CertificateError):
        replay_certificate(F, RankCertificate(3, (br, br)))


def test_workers_do_not_change_output():
    F = abelian_cubic()
    assert certify_rank1_trivial(F, workers=1) == certify_rank1_trivial(F, workers=3)


# -- resolution models -----------------------------------------------------------


def test_model_validation():
    with pytest.raises(ValueError, match="nonzero"):
        ResolutionModel(x4(), (1, 0))
    with pytest.raises(ValueError):
        ResolutionModel(x4(), ())
    m = ResolutionModel(x4(), (1, -1, 3))
    assert m.k == 3 and m.form.m == 12


def test_block_rank_examples():
    model = ResolutionModel(x4(), (2, 5))
    e1 = [0] * 9 + [1, 0]
    br = block_rank(model, e1)
    assert (br.rank0, br.support, br.total) == (0, frozenset({0}), 1)
    ident = [1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0]
    br = block_rank(model, ident)
    assert (br.rank0, br.support, br.total) == (9, frozenset(), 9)
    with pytest.raises(ValueError):
        block_rank(model, [0] * 10)


def test_block_rank_matches_full_rank(rng):
    for _ in range(50):
        m = rng.randint(1, 5)
        model = ResolutionModel(random_form(rng, m), tuple(rng.choice([-2, -1, 1, 3]) for _ in range(rng.randint(1, 3))))
        p = random_point(rng, m + model.k, lo=-1, hi=1)
        assert block_rank(model, p).total == full_rank_check(model, p)


def test_monotonicity(rng):
    F = random_form(rng, 4)
    p0 = random_point(rng, 4)
    small = ResolutionModel(F, (1,))
    big = ResolutionModel(F, (1, 2, -1))
    for _ in range(10):
        y = random_point(rng, 3, lo=-1, hi=1)
        assert block_rank(big, p0 + y).total >= block_rank(small, p0 + y[:1]).total


def test_classify_examples():
    model = ResolutionModel(x4(), (1, 1, 3))
    cert = certify_rank1_trivial(model.F_Z).certificate
    c = classify_candidate(model, [0] * 9 + [0, 1, 0], cert)
    assert c.kind is CandidateKind.EXCEPTIONAL_COMBINATION and c.support == {1}
    c = classify_candidate(model, [0] * 9 + [1, 0, 2], cert)
    assert c.kind is CandidateKind.EXCEPTIONAL_COMBINATION and c.support == {0, 2}
    c = classify_candidate(model, [1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0], cert)
    assert c.kind is CandidateKind.NOT_RANK_LE_2 and c.rank0 == 9
    c = classify_candidate(model, [0] * 9 + [1, 1, 1], cert)
    assert c.kind is CandidateKind.NOT_RANK_LE_2
    # a rank-one matrix point already has Hessian rank 4 on the determinant form
    c = classify_candidate(model, [1] + [0] * 11, cert)
    assert c.kind is CandidateKind.NOT_RANK_LE_2 and c.rank0 == 4


def test_classify_pullback():
    # x0*x1*x2 at e_0 has Hessian 6*[[0,0,0],[0,0,1],[0,1,0]], rank 2
    model = ResolutionModel(CubicForm.from_entries(3, {(0, 1, 2): 1}), (1,))
    cert = certify_rank1_trivial(model.F_Z).certificate
    p = [1, 0, 0, 0]
    assert hessian_rank_at(model.F_Z, p[:3]) == 2
    c = classify_candidate(model, p, cert)
    assert c.kind is CandidateKind.PULLBACK and c.support == frozenset()


def test_classify_rejects_bad_input():
    model = ResolutionModel(x4(), (1,))
    cert = certify_rank1_trivial(model.F_Z).certificate
    with pytest.raises(ValueError):
        classify_candidate(model, [0] * 10, cert)
    broken = RankCertificate(9, cert.steps[:-1])
    with pytest.raises(CertificateError):
        classify_candidate(model, [0] * 9 + [1], broken)


def test_classify_over_gaussian_points(rng):
    model = ResolutionModel(x4(), (1, -1)).widen(Field.Q_I)
    cert = certify_rank1_trivial(x4()).certificate
    for _ in range(30):
        p = random_point(rng, 11, Field.Q_I, -1, 1)
        if not any(p):
            continue
        c = classify_candidate(model, p, cert)
        br = block_rank(model, p)
        assert c.total == br.total


@pytest.mark.parametrize("make", [x4, x6])
def test_verdict_obstructed(make):
    for a in [(1,), (-1, 3), (1, 1, 1, 1, 1)]:
        v = decide_blowdown_obstruction(ResolutionModel(make(), a))
        assert v.status is VerdictStatus.OBSTRUCTED
        assert v.residual_assumptions == RESIDUAL_ASSUMPTIONS
        replay_certificate(make(), v.certificate)


def test_verdict_inconclusive():
    F = CubicForm.from_entries(2, {(0, 0, 0): 1, (1, 1, 1): 1})
    v = decide_blowdown_obstruction(ResolutionModel(F, (1,)))
    assert v.status is VerdictStatus.INCONCLUSIVE
    assert v.counterexample == (1, 0)
    assert v.residual_assumptions
