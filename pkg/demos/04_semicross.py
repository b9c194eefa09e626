"""Every tiling of Z^{p-1} by the semi-cross, for p = 3 and 5.

Run: python3 demos/04_semicross.py
"""
from leelab.semicross import (counting_lemma_check, cyclic_check, enumerate_semicross_tilings,
                              matches_standard, u_sets)

for p in (3, 5):
    r = enumerate_semicross_tilings(p)
    print(f"p={p}: {len(r.codes)} tilings through 0, {r.total_tilings} in all,"
          f" lattice={r.all_lattice}, permutation classes={len(r.classes)}, nodes={r.nodes}")
    print("  all equal the standard lattice up to axis order:",
          all(matches_standard(c) for c in r.codes))
    print("  counting identity for every k:",
          all(counting_lemma_check(c, k) for c in r.codes for k in range(1, p)))

r5 = enumerate_semicross_tilings(5)
code = r5.codes[0]
u = u_sets(code, code.codewords[0])
print("U-sets at", u.w, u.to_json()["U2+"], u.to_json()["U3+"])
print("checks:", u.checks)
print("cyclic symmetry under some axis order:", all(cyclic_check(c) for c in r5.codes))
