"""
Four colours on F_{n^3} x F_{n^3}
=================================

The product of two fans is a grid with a dominant row and column and a
dominant corner.  The layout below keeps every component quadratic in n:
green squares of side n+2, thin blue and red lines every n+3 steps, and
black triples that cut the dominant row and column into short runs.
"""

import numpy as np

from clusterprod import evaluate, fanfan_four_colouring
from clusterprod.upper import fanfan_four_layout

# %% the layout for n = 2, one letter per vertex
letters = np.array(list("RBGK"))  # red, blue, green, black
for row in letters[fanfan_four_layout(2)]:
    print("".join(row))

# %% measured clustering against 7 n^2
for n in range(2, 7):
    g, col = fanfan_four_colouring(n)
    rep = evaluate(g, col)
    print(f"n={n}: {g.n:6d} vertices, clustering {rep.clustering:4d} <= {7 * n * n},"
          f" largest green {rep.per_colour_max[2]} = (n+2)^2")
