"""
Closed geodesics and the metric scale
=====================================

Type-A closed geodesics of a suspension come from lattice vectors with
eigencoordinates (a, b): length sqrt(2|ab|), height ln|a/b| / 2. Rescaling
the lattice pushes a chosen finite set of classes below 4 - pi, where every
one of them has Morse-Bott index 1.
"""

import math

from solgeo.census import (
    choose_scale,
    closed_geodesic_A,
    elliptic_bound_scan,
    elliptic_length,
    shoot_type_A,
    summary_json,
    type_A_census,
    write_csv,
)
from solgeo.lattice_manifolds import build_manifold

M = build_manifold([[2, 1], [1, 1]])
rows = type_A_census(M, 4.0)
print(write_csv(rows[:6]), end="")
print(summary_json(rows, 1.0))
print("shooting miss", max(shoot_type_A(g) for g in rows))

classes = [(1, 0), (2, 3), (-4, 1)]
eps = choose_scale(M, classes)
small = build_manifold([[2, 1], [1, 1]], eps)
print(f"epsilon = {eps:.6f}")
for c in classes:
    g = closed_geodesic_A(c, small.eigencoordinates(c))
    print(c, f"{g.length:.6f}", g.morse_bott_index)

print("elliptic length at k = 0, 0.5, 0.9999:", [round(elliptic_length(k), 6) for k in (0, 0.5, 0.9999)])
scan = elliptic_bound_scan(20_000)
print(f"grid minimum {scan.min_value:.6f} >= {4 - math.pi:.6f}: {scan.holds}")
