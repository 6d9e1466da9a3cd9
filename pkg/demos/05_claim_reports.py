"""
Self-certifying claim reports
=============================

Each checker returns witnesses plus a pass flag that can be recomputed from
the witnesses alone.
"""

from fractions import Fraction

from cayleylab.elements import cycles, residue
from cayleylab.groups import construct
from cayleylab.serialize import serialize
from cayleylab.structure import subgroup_closure
from cayleylab.verifier import (check_abelian_diameter, check_bt, check_normal_set,
                                check_theorem_B, class_sets, recheck, run_corpus, summarize)

# the abelian bound is an equality for C5 with {1}
r = check_abelian_diameter(construct("cyclic:5"), [residue(1)])
print(serialize(r, "text").decode())

# S3 over A3: the binomial step is tight
S3 = construct("sym:3")
S = [cycles(3, (0, 1)), cycles(3, (0, 1, 2))]
r = check_theorem_B(S3, subgroup_closure(S3, [S[1]]), S)
print(serialize(r, "text").decode())

# transpositions of S3: |G/Z| reaches |S|!
for T in class_sets(S3):
    print(serialize(check_normal_set(S3, T), "text").decode())

# Q8: the centre sits inside the radius-2 ball
Q8 = construct("q8")
r = check_bt(Q8, Q8.generators, 5, Fraction(1, 4), 2)
print(serialize(r, "json").decode())
print("recheck:", recheck(r))

# a small sweep
reports = run_corpus(["sym:4", "dihedral:6", "q8", "wreath:3"], seed=1, samples=4)
print(summarize(reports))
