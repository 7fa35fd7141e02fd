"""
Strength in the plane: Z^2, A2 and three points on a circle
===========================================================
"""

from fractions import Fraction

from shellstrength.designs import triangle_strength
from shellstrength.strength import predicted_two_dim, strength_upto, two_dim_strength_check

# square lattice, shell of norm 5: (±1, ±2) and (±2, ±1)
print("Z2, m=5:", sorted(strength_upto("Z2", 5, 20).member_degrees))
print("closed form:", sorted(predicted_two_dim("Z2", 20)))

# hexagonal lattice, every nonempty shell up to 200
rows = two_dim_strength_check("A2", 200, 20)
print(len(rows), "A2 shells, all match:", all(r.ok for r in rows))

# the regular triangle and a lopsided one (angles in units of pi)
print(sorted(triangle_strength(Fraction(2, 3), Fraction(4, 3), 12)))
print(sorted(triangle_strength(Fraction(1, 3), Fraction(2, 3), 12)))
