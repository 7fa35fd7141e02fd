"""
The 24 roots of D4 as a spherical design
========================================

Check which harmonic degrees vanish on the root shell of D4, two ways.
"""

from fractions import Fraction

from shellstrength.designs import (PointSet, design_verdict, gegenbauer, half_set,
                                   inner_product_set, kernel_sum, verify_averaging)
from shellstrength.lattices import enumerate_shell

# the shell of norm 2: vectors like (1, -1, 0, 0)
X = PointSet.from_shell(enumerate_shell("D4", 2))
print(len(X), "points, squared norm", X.rho2)

# degree 2 by hand: the Gegenbauer kernel is 4t^2 - 1 and the pairs
# split by <x, y>/2 into {1: 1, 1/2: 8, 0: 6, -1/2: 8, -1: 1} per point
C2 = gegenbauer(4, 2)
print("C_2 coefficients:", [str(c) for c in C2])
print("kernel sum, degree 2:", kernel_sum(X, 2))

# all degrees up to 10: harmonic sums and kernel sums must agree
v = design_verdict(X, range(1, 11))
print("design degrees:", v.members)
for l in (6, 8):
    print(f"degree {l} kernel sum:", kernel_sum(X, l))

# moments of a 4-design match the sphere
print("averaging holds for t = 4:", verify_averaging(X, 4))

# one point from each antipodal pair
H = half_set(X)
A = inner_product_set(H)
print(len(H), "points in the half set, inner products", [str(a) for a in sorted(A)])
assert A == {Fraction(-1, 2), Fraction(0), Fraction(1, 2)}
