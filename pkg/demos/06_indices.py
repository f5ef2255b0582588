"""
Conley-Zehnder indices of the 2x2 blocks
========================================

The rotation block of a type-A geodesic has index 1 until its first full
turn at length 2 pi / sqrt2. The unipotent block is degenerate and gets
index 0 after a small perturbation.
"""

import math

from solgeo.cz_index import (
    UNIPOTENT_S,
    bott_perturbed_index,
    cz_index_path,
    hyperbolic_path,
    morse_bott_type_A,
    rotation_path,
)

for T in (1.0, 4.0, 5.0, 10.0):
    res = cz_index_path(rotation_path(T))
    print(f"rotation T={T:4.1f}: index {res.index}, crossings {[(round(t, 4), s) for t, s in res.crossings]}")

print("hyperbolic:", cz_index_path(hyperbolic_path(3.0)).index)
print("unipotent, perturbed:", bott_perturbed_index(UNIPOTENT_S, 1.0))
print("type-A lengths 1, 4 - pi, 5:", [morse_bott_type_A(L) for L in (1.0, 4 - math.pi, 5.0)])
