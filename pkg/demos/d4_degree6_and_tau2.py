"""
Degree 6 on D4 shells and the coefficients of eta(z)^8 eta(2z)^8
=================================================================

The degree-6 weighted theta series of D4 spans a single line.  Its
coefficients follow tau_2, so degree 6 drops out of the strength of a shell
exactly when tau_2(m) vanishes.
"""

from shellstrength.modring import fit_and_extend
from shellstrength.qseries import tau2
from shellstrength.theta import image_rank, weighted_theta

# the image of the degree-6 theta map has rank 1
rep = image_rank("D4", 6)
print("rank", rep.rank_lower_bound, "stabilized", rep.stabilized)
Z = rep.spanning_weights()[0]
print("spanning zonal axis:", Z.axis)

# a few coefficients straight from the lattice
th = weighted_theta("D4", Z, 12)
print("theta coefficients:", [str(c) for c in th.series.coeffs[:8]])

# identify the series in the weight-8 forms of level 2 and extend it
lf = fit_and_extend(th, level=2, weight=8, target_precision=2001)
print("monomials", lf.monomials, "fitted on", lf.fitted_depth, "coefficients")
c = lf.extended[1]
t2 = tau2(2000)
print("proportional to tau_2 up to m = 2000:",
      all(lf.extended[m] == c * t2[m] for m in range(1, 2001)))
print("smallest |tau_2(m)| for m <= 2000:", min(abs(v) for v in t2[1:]))
