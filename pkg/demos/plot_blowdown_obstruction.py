"""
Certificates and the blow-down obstruction
==========================================

A resolution model appends k exceptional cubes a_i * y_i^3 to the quotient
cubic.  The prover shows that the Hessian has rank <= 1 only at the origin,
and writes down each 2x2 minor it used so the argument can be replayed.
"""

from cubiform.cubic import CubicForm
from cubiform.exterior import abelian_cubic
from cubiform.obstruct import (
    ResolutionModel,
    certify_rank1_trivial,
    decide_blowdown_obstruction,
    replay_certificate,
)
from cubiform.quotient import DiagonalAction, quotient_cubic

# certificate for the torus itself
F = abelian_cubic()
result = certify_rank1_trivial(F)
print(result.status.value, len(result.certificate.steps), "steps")
for step in result.certificate.steps[:3]:
    print(" ", step.reduced_form, "->", step.conclusion)
replay_certificate(F, result.certificate)

# the X4 model with two exceptional divisors
model = ResolutionModel(quotient_cubic(DiagonalAction.from_label("i")), (1, -1))
verdict = decide_blowdown_obstruction(model)
print(verdict.status.value)
for line in verdict.residual_assumptions:
    print("  assumes:", line)

# x^3 + y^3 has a rank-one point, so nothing can be certified
cubes = CubicForm.from_entries(2, {(0, 0, 0): 1, (1, 1, 1): 1})
print("rank-one point:", [str(x) for x in certify_rank1_trivial(cubes).counterexample])
