"""
Weighted Weyl averages along n^2 beta
=====================================

(1/N) sum 1_I(n^2 beta) e(nt) with I = [1/4, 3/4): about 1/2 at t = 0 and
small elsewhere.
"""

from recurrence_lab.affine import weyl_average
from recurrence_lab.torus import FIXED, TorusScalar, irrational_surrogate

beta = irrational_surrogate("sqrt2", FIXED)  # 128-bit fixed point
freqs = {"0": TorusScalar.zero(FIXED), "1/3": TorusScalar.make(1, 3, FIXED),
         "1/7": TorusScalar.make(1, 7, FIXED), "golden": irrational_surrogate("golden", FIXED)}

for N in (10**3, 10**4, 10**5):
    row = "  ".join(f"t={name}: {abs(weyl_average(beta, t, N)):.4f}" for name, t in freqs.items())
    print(f"N={N:>6}  {row}")
