"""
Chromatic bounds of windowed Cayley graphs
==========================================

Odd differences give a bipartite graph at every window; powers of 2 settle at
a small constant; squares keep needing more colors in the upper bound.
"""

from recurrence_lab.cayley import chromatic_growth, growth_to_csv
from recurrence_lab.intsets import Powers, odds, squares

schedule = [100, 1000, 4000]
for name, R in (("odds", odds()), ("powers of 2", Powers(2)), ("squares", squares())):
    print(name)
    print(growth_to_csv(chromatic_growth(R, schedule)))
