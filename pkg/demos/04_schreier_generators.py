"""
Schreier generators
===================

Generators for a subgroup built from a BFS transversal of its right cosets.
Their diameter inside H never exceeds the diameter of the whole group.
"""

from cayleylab.cayley import diameter
from cayleylab.elements import cycles
from cayleylab.groups import construct
from cayleylab.structure import all_subgroups, coset_transversal, schreier_generators, subgroup_closure

S3 = construct("sym:3")
S = [cycles(3, (0, 1)), cycles(3, (0, 1, 2))]
A3 = subgroup_closure(S3, [S[1]])
print(coset_transversal(S3, A3, S))
data = schreier_generators(S3, A3, S)
print(data.generators, "bound", data.size_bound)

# every subgroup of S4 with the standard generators
S4 = construct("sym:4")
d = diameter(S4, S4.generators)
print("diam(S4) =", d)
for H in all_subgroups(S4):
    gens = schreier_generators(S4, H, S4.generators).generators
    print(f"|H| = {H.order:2}  index {H.index:2}  |S-bar| = {len(gens):2}  "
          f"diam(H) = {diameter(H.as_group(), gens)}")
