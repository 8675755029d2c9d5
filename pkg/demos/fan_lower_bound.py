"""
Fans resist two colours
=======================

A fan is a path with one extra vertex joined to everything.  However two
colours are spread over it, some monochromatic component has roughly
sqrt(n) vertices.  The exact search confirms this for small fans.
"""

import math

from clusterprod import fan, min_clustering, evaluate

# exact minimum clustering of F_n with two colours
for n in range(1, 17):
    out = min_clustering(fan(n), 2)
    print(f"F_{n:<2d}  min clustering {out.min_clustering}   floor(sqrt(n)) = {math.isqrt(n)}"
          f"   ({out.nodes_explored} search nodes)")

# the witness for F_9: the dominant vertex 0 shares its colour with few
# path vertices, and the other colour is cut into short runs
out = min_clustering(fan(9), 2)
print("\nan optimal colouring of F_9:", out.witness.assignment)
print("component sizes by colour:", evaluate(fan(9), out.witness).component_census)
