"""
Strength of E8 shells from lifted theta series
==============================================

For E8 the weighted theta series are level-1 modular forms, so a handful of
coefficients fix each one.  Lifting them gives the strength of every shell
up to m = 300 without touching the large shells.
"""

import time
from collections import Counter

from shellstrength.strength import appendix_strength_scan, strength_upto
from shellstrength.theta import image_rank

# dimensions of the images for l = 2, ..., 16
print({l: image_rank("E8", l).rank_lower_bound for l in range(2, 17, 2)})

# the first shell: the 240 roots
rep = strength_upto("E8", 1, 32)
print("m = 1:", sorted(rep.member_degrees))
print("witness for degree 8:", rep.witnesses[8])

t = time.time()
reps = appendix_strength_scan("E8", 300, 32, method="lifted")
print(Counter(tuple(sorted(r.member_degrees)) for r in reps), f"{time.time() - t:.1f}s")
