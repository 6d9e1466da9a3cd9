"""
Groups from multiplication tables
=================================

Any finite group can be loaded from a table file: a size line, one row per
element, and an optional ``gens`` line.
"""

from pathlib import Path

from cayleylab.cayley import diameter
from cayleylab.groups import read_table
from cayleylab.structure import best_abelian_section, center, conjugacy_classes, lower_central_series, whole_group

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

for name in ("s3.tbl", "a4.tbl", "dic12.tbl", "heis27.tbl"):
    G = read_table(FIXTURES / name)
    best, H = best_abelian_section(G)
    print(f"{name:11} order {G.order:3}  classes {conjugacy_classes(G).count:2}  "
          f"|Z| {center(G).order}  diam {diameter(G, G.generators)}  "
          f"class {lower_central_series(whole_group(G))[0]}  max |H/H'| {best}")
