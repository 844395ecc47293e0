"""
Perturbation lift on a 4x4 Jordan block
=======================================

Given small vertical defects w_1..w_3, builds y with (M^n - Id)^k y close to
v_k and checks the exact identities, then watches the norms shrink like 1/n.
"""

from fractions import Fraction

from recurrence_lab.unipotent import lift_perturbation

w = [(Fraction(1, 100), 0, 0, 0), (Fraction(-1, 200), 0, 0, 0), (Fraction(1, 300), 0, 0, 0)]
for n in (10, 100, 1000, 10000):
    cert = lift_perturbation(4, 3, n, w)
    norms = [float(x) for x in cert.residual_norms()]
    print(f"n={n:>5}  exact={cert.lower_vanishes and cert.diagonal_exact}  |y|*n={float(cert.y_norm()) * n:.5f}  "
          f"residual*n={[round(x * n, 5) for x in norms]}")
