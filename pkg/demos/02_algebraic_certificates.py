"""Nonexistence of lattice codes, and exact character sums.

Run: python3 demos/02_algebraic_certificates.py
"""
import time

from leelab import lee_sphere
from leelab.algebra import (CharacterPoint, character_sum, prime_tile_reduction,
                            prove_no_linear, radius1_alphabet_condition,
                            theorem_d_witness_search)
from leelab.certificates import verify_certificate

# A lattice tiling by S(n,2) is a homomorphism onto a group of order
# |S(n,2)| that is one-to-one on the sphere.  Exhaust every group.
for n in range(3, 8):
    t0 = time.perf_counter()
    cert = prove_no_linear(n, 2)
    print(f"n={n}: {cert['verdict']:12s} groups={[g['group'] for g in cert['groups']]}"
          f" nodes={cert['nodes']} ({time.perf_counter() - t0:.2f}s)")

# Certificates replay: the checker re-runs each group search and compares counts.
print("replay:", verify_certificate(prove_no_linear(3, 2))["ok"])

# Q_V at a point of order 5 decided exactly in Z[zeta_5].
val, approx = character_sum(lee_sphere(3, 2), CharacterPoint(5, (0, 1, 2)))
print("Q_S(3,2) at (0,1,2)/5 is zero:", val.is_zero(), " float shadow:", approx)
scan = theorem_d_witness_search(lee_sphere(3, 2), [5])
print("first witness:", scan.witness.alpha, "after", scan.points_scanned, "points")

# Radius one: a linear PL(n,1,q) exists exactly when rad(2n+1) divides q.
for n, q in [(4, 3), (3, 5), (12, 10)]:
    out = radius1_alphabet_condition(n, q)
    print(f"PL({n},1,{q}):", out["condition"], out.get("verified", ""))

# A prime-size tile tiles iff a homomorphism onto Z_p does.
print("S(4,2), 41 points:", prime_tile_reduction(lee_sphere(4, 2))["verdict"])
