"""
The Hex lemma on a framed grid
==============================

Triangulate a grid, put an apex over each side and join the apexes in a
4-cycle a-b-c-d.  With col(a)=col(c) and col(b)=col(d), every 2-colouring
has a monochromatic a-c path or b-d path, just like the board game Hex.
"""

import random

from clusterprod.families import framed_grid
from clusterprod.search import framed_colouring, hex_check
from clusterprod.cli import hex_sweep

fg = framed_grid(4, 5)
rng = random.Random(2)
interior = [rng.randrange(2) for _ in fg.interior]
col = framed_colouring(fg, interior, ac=0, bd=1)

# draw the board, rows top to bottom
for i in range(fg.rows):
    print(" " * i + " ".join(".#"[interior[i * fg.cols + j]] for j in range(fg.cols)))
side, path = hex_check(fg, col)
print(f"\nwinning side {side}: {path}")

# exhaustive check on the two smallest interesting boards
for rows, cols in ((3, 3), (4, 3)):
    print(hex_sweep(rows, cols))
