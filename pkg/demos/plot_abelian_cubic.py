"""
The cubic form of a complex 3-torus
===================================

H^2 has 15 basis classes dz_i^dz_j, dz_i^dzb_j and dzb_i^dzb_j.  The cup
product of three of them is a signed multiple of the top form, which gives a
cubic form in 15 variables.
"""

from cubiform.cubic import hessian_form, hessian_rank_at
from cubiform.exterior import H2_LABELS, TOP_FORM, abelian_cubic, basis_index, dz, dzb, wedge

print("top form:", TOP_FORM)
print("basis:", " ".join(H2_LABELS))

# wedge signs come from sorting into the reference order
print(wedge(dzb(1), dz(2)))

F = abelian_cubic()
print(len(F.entries), "nonzero unordered triples")

# a 2x2 block of the Hessian, as linear forms in x_1 .. x_15
H = hessian_form(F)
rows = [basis_index("z12"), basis_index("z13")]
cols = [basis_index("z2b1"), basis_index("z3b1")]
for r in rows:
    print([str(H[r, c]) for c in cols])

# the Hessian at a single class already has rank 6
p = [0] * 15
p[basis_index("zb2b3")] = 1
print("rank at zb2b3:", hessian_rank_at(F, p))
