"""
The Sol group and its metric
============================

Sol is R^3 with the product (a,b,c)(x,y,z) = (e^c x + a, e^-c y + b, z + c)
and the left-invariant metric e^-2z dx^2 + e^2z dy^2 + dz^2.
"""

import math

from solgeo.sol_core import E1, E3, IDENTITY, Isometry, SolElement, inner_product, sol_commutator, sol_mul

# Moving up one unit in z stretches the x direction by e.
print(sol_mul(E3, E1))

# The group is not abelian: the commutator of e3 and e1 is a pure x shift.
print(sol_commutator(E3, E1), "expected x =", math.e - 1)

# Horizontal lengths depend on the height.
for z in (-1.0, 0.0, 1.0):
    p = SolElement(0, 0, z)
    print(f"z={z:+.0f}  |d/dx|^2 = {inner_product(p, (1, 0, 0), (1, 0, 0)):.4f}"
          f"  |d/dy|^2 = {inner_product(p, (0, 1, 0), (0, 1, 0)):.4f}")

# rho swaps the two horizontal directions and flips z; it has order 4.
rho = Isometry.rho()
g = SolElement(1.0, 2.0, 3.0)
print(rho(g), rho.power(4)(g))

# A deck transformation of the cat-map suspension.
lam = math.log((3 + math.sqrt(5)) / 2)
deck = Isometry.deck(lam)
print(deck(IDENTITY), deck(SolElement(1.0, 1.0, 0.0)))
