"""
Suspensions of hyperbolic toral maps
====================================

A hyperbolic A in GL2(Z) gives a closed Sol manifold. Its first homology is
Z plus the cokernel of A - I, and the vertical closed geodesics of period n
sit over the |det(A^n - I)| fixed points of A^n.
"""

from solgeo.census import enumerate_periodic_points, type_B_count
from solgeo.lattice_manifolds import build_manifold, homology, smith_normal_form

for A in ([[2, 1], [1, 1]], [[3, 2], [1, 1]], [[1, 1], [1, 0]], [[5, 4], [1, 1]]):
    M = build_manifold(A)
    h = homology(M).as_strings()
    print(A, f"lambda={M.monodromy.lam:.6f}", h)

U, D, V = smith_normal_form([[2, 2], [1, 0]])
print("SNF diag", D[0, 0], D[1, 1])

cat = [[2, 1], [1, 1]]
for n in range(1, 5):
    print(n, type_B_count(cat, n))
print([f"({x}, {y})" for x, y in enumerate_periodic_points(cat, 2)])
