"""
Exact arithmetic in Q(i) and Q(omega)
=====================================

Field elements are pairs of rationals tagged with the field they live in.
"""

from fractions import Fraction

from cubiform.field import I, OMEGA, Field, FieldElem, widen

# omega is a primitive cube root of unity, so omega^2 = -1 - omega
print("omega^2 =", OMEGA**2)
print("omega^3 =", OMEGA**3)

# division stays exact
z = (3 + 2 * I) / (1 - I)
print("(3+2i)/(1-i) =", z, " norm", z.norm())

# rationals and ints mix freely with field elements
print(Fraction(1, 2) * OMEGA + 1)

# mixing i and omega is refused rather than guessed
try:
    I + OMEGA
except ValueError as exc:
    print("refused:", exc)

# widening a rational into Q(i) is explicit
print(widen(FieldElem(5), Field.Q_I).field)
