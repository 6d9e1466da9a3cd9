"""
Diameter scaling along families
===============================

Exact diameters and the least-squares slope of log diam against log |G|.
"""

import math

from cayleylab.cayley import diameter, find_log_set
from cayleylab.groups import construct
from cayleylab.serialize import serialize
from cayleylab.verifier import check_scaling, scaling_experiment

rows = scaling_experiment("CYCLIC", [16, 32, 64, 128, 256, 512, 1024])
print(serialize(rows, "csv").decode())

rows = scaling_experiment("WREATH", range(2, 9))
print(serialize(rows, "csv").decode())
print(check_scaling("WREATH", rows).witnesses)

rows = scaling_experiment("SL2", [3, 5, 7, 11, 13])
for r in rows:
    print(r.parameter, r.group_order, r.diameter, round(4 * math.log2(r.group_order), 1))

# random sets of logarithmic size already have logarithmic diameter
G = construct("sym:6")
S = find_log_set(G, 4, 4, trials=100, seed=7)
print(len(S), diameter(G, S))
