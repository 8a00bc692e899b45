"""
Quotients by diagonal actions
=============================

For zeta = i or zeta = -omega acting diagonally, only the nine mixed classes
dz_i^dzb_j are invariant and the quotient cubic is a multiple of the 3x3
determinant.
"""

import sympy

from cubiform.cubic import hessian_rank_at, multiplicity
from cubiform.quotient import DiagonalAction, invariant_subspace, quotient_cubic

for label in ("i", "-omega"):
    act = DiagonalAction.from_label(label)
    inc = invariant_subspace(act)
    print(label, "order", act.order, "invariant classes", inc.labels)

# read the quotient cubic back as a polynomial in a 3x3 matrix of symbols
X = sympy.Matrix(3, 3, lambda i, j: sympy.Symbol(f"x{i + 1}{j + 1}"))
flat = list(X)
Z = quotient_cubic(DiagonalAction.from_label("i"))
poly = sum(int(v.a) * multiplicity(k) * flat[k[0]] * flat[k[1]] * flat[k[2]] for k, v in Z.entries)
print(sympy.factor(poly))

# at the identity matrix the Hessian is nondegenerate
print("rank at identity:", hessian_rank_at(Z, [1, 0, 0, 0, 1, 0, 0, 0, 1]))
