"""
Orbits of an affine map on the 2-torus
======================================

Builds T(x) = Mx + alpha with M a 2x2 Jordan block, picks alpha so the first
coordinate of the orbit of 0 is n^2 beta, and reads off return times.
"""

from fractions import Fraction

from recurrence_lab.affine import AffineSystem, BallSpec, choose_alpha_polynomial, iterate, return_times_point
from recurrence_lab.torus import TorusPoint, circle_norm, irrational_surrogate

# a rational stand-in for sqrt(2) - 1 with a 65-bit denominator
beta = irrational_surrogate("sqrt2")
print("beta ~", float(beta), "denominator bits:", beta.den.bit_length())

alpha = choose_alpha_polynomial(2, beta)
T = AffineSystem.jordan(alpha)
zero = TorusPoint.zero(2)

for n in (1, 2, 3, 10, 1000):
    x = iterate(T, zero, n)
    print(f"T^{n} 0 = ({float(x[0]):.6f}, {float(x[1]):.6f})   n^2 beta mod 1 = {float(beta * n * n):.6f}")

# the cylinder {||x_1|| < 1/10} sees exactly the n with ||n^2 beta|| < 1/10
U = BallSpec.cylinder(zero, Fraction(1, 10), [0])
times = return_times_point(T, zero, U, 200)
print("returns to the cylinder up to 200:", times)
print("all satisfy ||n^2 beta|| < 1/10:", all(circle_norm(beta * n * n) < Fraction(1, 10) for n in times))
