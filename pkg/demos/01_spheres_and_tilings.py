"""Lee spheres, and the torus tilings they form in small dimensions.

Run: python3 demos/01_spheres_and_tilings.py
"""
from leelab import lee_sphere, sphere_size, verify_perfect
from leelab.search import SearchOptions, search_tiling
from leelab.torus import detect_periods

# Sphere sizes grow like 2^n C(n+e, n); a few rows of the table.
for n in range(1, 6):
    print(n, [sphere_size(n, e) for e in range(5)])

# The diamond S(2,2) has 13 points, and 13 copies of it tile Z_13^2.
tile = lee_sphere(2, 2)
res = search_tiling(tile, 2, 13)
print(res.verdict, "after", res.stats.nodes, "nodes")
code = res.code
print("codewords:", code.codewords[:4], "...")
print("perfect:", verify_perfect(code, tile, e=2).covered_exactly_once)

# The tiling found is a lattice: its period group has 13 elements.
periods = detect_periods(code)
print("periods:", len(periods), "basis:", periods.lattice_basis())

# Counting every tiling, with symmetry reduction off, gives the full picture.
everything = search_tiling(tile, 2, 13, SearchOptions(symmetry_reduction=False,
                                                     max_solutions=None))
print("tilings through 0:", len(everything.codes))

# PL(3,2,25): the exact-cover engine exhausts the search in a handful of nodes.
res = search_tiling(lee_sphere(3, 2), 3, 25)
print("PL(3,2,25):", res.verdict, res.stats.nodes, "nodes;", res.reductions)
