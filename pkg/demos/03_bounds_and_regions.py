"""The linear-programming witness, Post's sector census and the region map.

Run: python3 demos/03_bounds_and_regions.py
"""
from leelab.density import (band, build_witness, gw_region, lp_interval, lp_lhs,
                            verify_lp_conditions)
from leelab.sectors import census_g, post_combination, post_threshold

# The witness for (n, e) = (6, 2): four orbits, exact rationals.
w = build_witness(6, 2)
for rep, val in w.h.items():
    print(f"  h({rep}) = {val}")
rep = verify_lp_conditions(6, 2)
print("conditions hold:", rep.vanishes_on_sphere, rep.convolution_nonneg_outside,
      "| total", rep.total_sum, "| two routes agree:", rep.routes_agree)

# Where the total turns negative.  For e = 18 the band is [75, 142].
for e in (18, 19, 20, 25):
    ns = lp_interval(e)
    print(f"e={e}: inequality holds for n in [{ns[0]}, {ns[-1]}]",
          f"| stated band [{3 * e + 21}, {e * e // 2 - 20}]")
print("lhs(75,18) =", float(lp_lhs(75, 18)), " lhs(74,18) =", float(lp_lhs(74, 18)))

# Post: count sectors by how many sphere points they contain.
for n, e in [(6, 2), (6, 3), (7, 4)]:
    print((n, e), post_combination(census_g(n, e)))
print("Post thresholds:", {n: post_threshold(n) for n in (6, 7, 10, 74)})

# The region map at a few rows.
print("LP band at n=75:", band(75, "LP", range(300)))
for n, e in [(6, 2), (6, 3), (100, 30), (876, 285), (876, 286)]:
    print((n, e), gw_region(n, e).status)
