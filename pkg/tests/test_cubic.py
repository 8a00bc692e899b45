from fractions import Fraction

import pytest
import sympy

from cubiform.cubic import (
    CubicForm,
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
from cubiform.exterior import abelian_cubic, basis_index
from cubiform.field import I, Field, FieldElem, FieldTagError
from cubiform.linalg import matmul, matvec, rank, transpose
from conftest import random_form, random_invertible, random_point

X = sympy.symbols("x1:16")


def to_sympy(F: CubicForm):
    """Polynomial of ``F`` built by summing over every ordered index triple."""
    xs = X[: F.m]
    t = F.tensor
    expr = 0
    for a in range(F.m):
        for b in range(F.m):
            for c in range(F.m):
                v = t.get(tuple(sorted((a, b, c))))
                if v is not None:
                    coeff = sympy.Rational(v.a) + sympy.Rational(v.b) * sympy.I
                    expr += coeff * xs[a] * xs[b] * xs[c]
    return sympy.expand(expr), xs


def cube(m=1):
    return CubicForm.from_entries(m, {(i, i, i): 1 for i in range(m)})


def test_evaluate_examples():
    assert evaluate(cube(), [2]) == 8
    F = abelian_cubic()
    assert evaluate(F, [0] * 15) == 0
    p = [0] * 15
    for lab in ("z12", "z3b1", "zb2b3"):
        p[basis_index(lab)] = 1
    # (g1 + g2 + g3)^3 keeps the 3! orderings of three distinct classes
    assert evaluate(F, p) == 6


def test_evaluate_matches_polynomial(rng):
    for _ in range(20):
        m = rng.randint(1, 5)
        F = random_form(rng, m)
        poly, xs = to_sympy(F)
        p = random_point(rng, m)
        assert evaluate(F, p) == poly.subs(dict(zip(xs, [int(v.a) for v in p])))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        evaluate(cube(2), [1])
    with pytest.raises(ValueError):
        hessian_rank_at(cube(2), [1, 2, 3])


def test_hessian_examples():
    H = hessian_form(cube())
    assert H[0, 0].coefficients == (6,)
    H2 = hessian_form(cube(2))
    assert str(H2[0, 0]) == "6*x_1" and str(H2[1, 1]) == "6*x_2"
    assert str(H2[0, 1]) == "0" and str(H2[1, 0]) == "0"


def test_abelian_minor_from_tensor():
    H = hessian_form(abelian_cubic())
    rows = [basis_index("z12"), basis_index("z13")]
    cols = [basis_index("z2b1"), basis_index("z3b1")]
    sub = [[H[r, c].support() for c in cols] for r in rows]
    w = basis_index("zb2b3")
    # z12^z3b1^zb2b3 is in reference order, z13^z2b1^zb2b3 needs one transposition
    assert sub == [[{}, {w: 6}], [{w: -6}, {}]]


def test_hessian_matches_sympy(rng):
    for _ in range(15):
        m = rng.randint(1, 5)
        F = random_form(rng, m)
        poly, xs = to_sympy(F)
        Hs = sympy.hessian(poly, xs)
        H = hessian_form(F)
        for j in range(m):
            for k in range(m):
                lf = sum(int(c.a) * xs[i] for i, c in enumerate(H[j, k].coefficients))
                assert sympy.expand(Hs[j, k] - lf) == 0


def test_hessian_symmetric(rng):
    F = random_form(rng, 5)
    H = hessian_form(F)
    for j in range(5):
        for k in range(5):
            assert H[j, k] == H[k, j]


def test_rank_examples():
    assert hessian_rank_at(cube(), [1]) == 1
    assert hessian_rank_at(cube(3), [0, 0, 0]) == 0


def test_abelian_rank_at_single_class():
    F = abelian_cubic()
    p = [0] * 15
    p[basis_index("zb2b3")] = 1
    poly, xs = to_sympy(F)
    oracle = sympy.hessian(poly, xs).subs(dict(zip(xs, p))).rank()
    assert oracle == 6
    assert hessian_rank_at(F, p) == 6


def test_rank_over_gaussian_field_matches_sympy(rng):
    for _ in range(10):
        m = rng.randint(2, 5)
        F = random_form(rng, m).widen(Field.Q_I)
        p = random_point(rng, m, Field.Q_I, -2, 2)
        H = hessian_at(F, p)
        M = sympy.Matrix([[sympy.Rational(x.a) + sympy.Rational(x.b) * sympy.I for x in row] for row in H])
        assert hessian_rank_at(F, p) == M.rank(simplify=True)


def test_rank_needs_explicit_widening():
    with pytest.raises(FieldTagError):
        hessian_rank_at(cube(), [I])
    assert hessian_rank_at(cube().widen(Field.Q_I), [I]) == 1


def test_base_change_examples(rng):
    F = random_form(rng, 3)
    ident = [[int(i == j) for j in range(3)] for i in range(3)]
    assert base_change(F, ident) == F
    assert base_change(cube(), [[2]]) == CubicForm.from_entries(1, {(0, 0, 0): 8})
    with pytest.raises(ValueError):
        base_change(cube(2), [[1, 1], [1, 1]])


def test_base_change_is_composition(rng):
    for _ in range(20):
        m = rng.randint(1, 4)
        F = random_form(rng, m)
        L = random_invertible(rng, m)
        p = random_point(rng, m)
        assert evaluate(base_change(F, L), p) == evaluate(F, matvec(L, p))


def test_hessian_covariance(rng):
    for _ in range(20):
        m = rng.randint(1, 4)
        F = random_form(rng, m)
        L = random_invertible(rng, m)
        p = random_point(rng, m)
        lhs = hessian_at(base_change(F, L), p)
        rhs = matmul(matmul(transpose(L), hessian_at(F, matvec(L, p))), L)
        assert lhs == rhs
        assert rank(lhs) == hessian_rank_at(F, matvec(L, p))


def test_euler_identities(rng):
    for _ in range(20):
        m = rng.randint(1, 5)
        F = random_form(rng, m)
        p = random_point(rng, m)
        poly, xs = to_sympy(F)
        subs = dict(zip(xs, [int(v.a) for v in p]))
        grad_oracle = [poly.diff(x).subs(subs) for x in xs]
        assert gradient(F, p) == grad_oracle
        Hp = matvec(hessian_at(F, p), p)
        assert Hp == [2 * g for g in gradient(F, p)]
        assert sum((g * x for g, x in zip(gradient(F, p), p)), FieldElem(0)) == 3 * evaluate(F, p)


def test_pullback_to_fewer_variables():
    F = cube(2)
    # x -> (x, x): F = 2x^3
    assert pullback(F, [[1], [1]]) == CubicForm.from_entries(1, {(0, 0, 0): 2})


def test_blowup_point_examples():
    assert blowup_point(cube(), 1) == cube(2)
    with pytest.raises(ValueError):
        blowup_point(cube(), 0)


def test_blowup_point_exceptional_rank(rng):
    for _ in range(25):
        m = rng.randint(0, 5)
        F = random_form(rng, m)
        a = rng.choice([-3, -2, -1, 1, 2, 3])
        G = blowup_point(F, a)
        assert hessian_rank_at(G, [1] + [0] * m) == 1


def test_blowup_point_block_structure(rng):
    F = random_form(rng, 4)
    G = blowup_point(F, 2)
    for _ in range(10):
        q = random_point(rng, 4)
        assert hessian_rank_at(G, [0] + q) == hessian_rank_at(F, q)


def test_blowup_curve_reduces_to_point(rng):
    F = random_form(rng, 3)
    assert blowup_curve(F, 5, [0, 0, 0]) == blowup_point(F, 5)


def test_blowup_curve_formula():
    F = CubicForm.from_entries(1, {(0, 0, 0): 1})
    G = blowup_curve(F, 2, [Fraction(1, 3)])
    poly, xs = to_sympy(G)
    x0, x1 = xs
    assert sympy.expand(poly - (2 * x0**3 + 3 * sympy.Rational(1, 3) * x0**2 * x1 + x1**3)) == 0


def test_blowup_curve_exceptional_rank(rng):
    for _ in range(40):
        m = rng.randint(1, 5)
        F = random_form(rng, m)
        a = rng.randint(-3, 3)
        b = [rng.choice([0, 0, rng.randint(-3, 3)]) for _ in range(m)]
        r = hessian_rank_at(blowup_curve(F, a, b), [1] + [0] * m)
        assert r <= 2
        # oracle: [[6a, 6b], [6b^T, 0]] by elimination in sympy
        M = sympy.zeros(m + 1, m + 1)
        M[0, 0] = 6 * a
        for i, bi in enumerate(b, start=1):
            M[0, i] = M[i, 0] = 6 * bi
        assert r == M.rank()
        if a != 0:
            assert (r == 2) == any(b)


def test_direct_sum_with_cubes(rng):
    F = random_form(rng, 3)
    assert direct_sum_with_cubes(F, []) == F
    G = direct_sum_with_cubes(F, [2, -1])
    assert G.m == 5
    assert hessian_rank_at(G, [0, 0, 0, 1, 0]) == 1
    with pytest.raises(ValueError):
        direct_sum_with_cubes(F, [1, 0])


def test_direct_sum_block_additivity(rng):
    for _ in range(30):
        m = rng.randint(1, 4)
        F = random_form(rng, m)
        a = [rng.choice([-2, -1, 1, 3]) for _ in range(rng.randint(1, 3))]
        p0 = random_point(rng, m, lo=-1, hi=1)
        p1 = random_point(rng, len(a), lo=-1, hi=1)
        G = direct_sum_with_cubes(F, a)
        assert hessian_rank_at(G, p0 + p1) == hessian_rank_at(F, p0) + sum(1 for y in p1 if y)


def test_zero_variable_form():
    F = CubicForm.zero(0)
    assert evaluate(F, []) == 0
    assert hessian_rank_at(F, []) == 0
    assert hessian_form(F).m == 0
    assert blowup_point(F, 3) == CubicForm.from_entries(1, {(0, 0, 0): 3})


def test_form_validation():
    with pytest.raises(ValueError):
        CubicForm.from_entries(2, {(0, 0, 2): 1})
    with pytest.raises(ValueError):
        CubicForm.from_entries(2, [((0, 1, 1), 1), ((1, 0, 1), 2)])
    assert CubicForm.from_entries(2, {(1, 0, 1): 0}).entries == ()
