"""
Balls and diameters
===================

Breadth-first search from the identity, one level per word length.
"""

from cayleylab.cayley import ball_profile, diameter
from cayleylab.elements import cycles, residue
from cayleylab.groups import GeneratingSet, construct

# a cyclic group with the generator 1: the ball grows by one element per step
C12 = construct("cyclic:12")
print(ball_profile(C12, [residue(1)]).sizes)

# adding -1 makes the walk two-sided, so the diameter halves
S = GeneratingSet((residue(1),)).symmetrized(C12)
print(diameter(C12, [residue(1)]), diameter(C12, S))

# S3 with a transposition and a 3-cycle
S3 = construct("sym:3")
t, c = cycles(3, (0, 1)), cycles(3, (0, 1, 2))
print(ball_profile(S3, [t, c]))

# the 3-cycle alone stalls at A3
prof = ball_profile(S3, [c])
print(prof.sizes, prof.generates, diameter(S3, [c]))

# the lamplighter-style wreath product grows linearly in n
for n in range(2, 7):
    W = construct(f"wreath:{n}")
    print(n, W.order, diameter(W, W.generators))
