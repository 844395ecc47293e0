"""
Colorings without monochromatic progressions
============================================

Half-circle colorings avoid long progressions whose step moves the rotation
far; power colorings do the same for steps with ||n^2 beta|| large. Then a
coloring becomes a syndetic set and back.
"""

from fractions import Fraction

import numpy as np

from recurrence_lab.coloring import (
    affine_coloring,
    find_mono_ap,
    not2large_length,
    random_coloring,
    rotation_coloring,
    syndetic_encode,
)
from recurrence_lab.intsets import PowerBohr, naturals
from recurrence_lab.torus import irrational_surrogate

alpha = irrational_surrogate("golden")
N = 20000
two = rotation_coloring(alpha, 2, N)
for eps in (Fraction(1, 20), Fraction(1, 10), Fraction(1, 5)):
    length = not2large_length(eps)
    ap = find_mono_ap(two, length, PowerBohr(1, alpha, eps, "outside"))
    print(f"eps={eps}: length {length} progressions with ||n alpha|| > eps -> {ap}")

# without the step restriction the same coloring is full of them
print("any step:", find_mono_ap(two, 6, naturals()))

c = affine_coloring(alpha, 2, Fraction(1, 4), 5000)
print(f"{c.colors} colors, 3-term progressions with ||n^2 alpha|| > 1/4:",
      find_mono_ap(c, 3, PowerBohr(2, alpha, Fraction(1, 4), "outside")))

rng = np.random.default_rng(0)
c = random_coloring(4, 1000, rng)
enc = syndetic_encode(c)
print("E starts", enc.members[:10], "max gap", enc.max_gap, "<= 2r - 1 =", 2 * enc.r - 1)
