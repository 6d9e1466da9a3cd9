"""
Subgroups, abelian sections and nilpotency
==========================================
"""

from cayleylab.groups import construct
from cayleylab.structure import (abelian_invariants, all_subgroups, best_abelian_section,
                                 conjugacy_classes, lower_central_series, whole_group)

for spec in ("sym:3", "q8", "sym:4", "sl2:5"):
    G = construct(spec)
    subs = all_subgroups(G)
    k = conjugacy_classes(G).count
    best, H = best_abelian_section(G)
    print(f"{spec:6} order {G.order:4}  subgroups {len(subs):3}  classes {k:2}  "
          f"max |H/H'| {best:3} at |H| = {H.order}, class {H.nilpotency_class}")

# invariants of the abelianization
G = construct("product:cyclic:4,cyclic:6")
print(abelian_invariants(whole_group(G)))

# Q8 is nilpotent of class 2; S3 is not nilpotent
print(lower_central_series(whole_group(construct("q8"))))
print(lower_central_series(whole_group(construct("sym:3"))))

# the subgroup lattice of S4 by order
orders = {}
for H in all_subgroups(construct("sym:4")):
    orders[H.order] = orders.get(H.order, 0) + 1
print(sorted(orders.items()))
