"""
Exact product-set growth
========================

Sizes of S^n (words of length exactly n) and the first n with
|S^{5n}| <= theta |S^n|.
"""

from fractions import Fraction

from cayleylab.cayley import growth_condition, power_profile
from cayleylab.elements import cycles
from cayleylab.groups import construct

S3 = construct("sym:3")
S = [cycles(3, (0, 1)), cycles(3, (0, 1, 2))]
print(power_profile(S3, S, 6).sizes)

print(growth_condition(S3, S, 3, 1))

# a slowly growing set: a long cycle and a transposition in S6
S6 = construct("sym:6")
prof = power_profile(S6, S6.generators, 12)
print(prof.sizes)

# |S^5| = 20 = 10 |S|, so theta = 5 finds nothing and theta = 10 succeeds at n = 1
print(growth_condition(S6, S6.generators, 5, Fraction(1, 4)))
print(growth_condition(S6, S6.generators, 10, Fraction(1, 4)))
