"""
Linearized flow along the model geodesics
=========================================

The 6x6 monodromy of the geodesic flow, left-trivialized, has trace
4 + 2 cos(sqrt2 T) along type A and 2 + 4 cosh T along the vertical line.
"""

import math

import numpy as np

from solgeo.geodesic_flow import GeodesicType, exact_initial_state
from solgeo.linearized_flow import (
    frame_matrix_A,
    jacobi_A_cos,
    jacobi_A_sin,
    jacobi_field_check,
    jacobi_sinh_X,
    monodromy,
)

A = GeodesicType("A", branch="f2")
B = GeodesicType("B", leaf="vertical")

print(" T     trace A   expected   trace B    expected")
for T in (0.5, 1.0, 2.0, 4.0):
    ma = monodromy(exact_initial_state(A), T)
    mb = monodromy(exact_initial_state(B), T)
    print(f"{T:4.1f} {ma.trace:9.6f} {4 + 2 * math.cos(math.sqrt(2) * T):9.6f}"
          f" {mb.trace:10.5f} {2 + 4 * math.cosh(T):10.5f}")

m = monodromy(exact_initial_state(A), 2.0)
print("eigenvalues along A:", np.round(np.sort_complex(m.eigenvalues), 6))
print("symplectic defect", f"{m.symplectic_defect():.1e}")

# Half a turn of the rotation block.
print(np.round(frame_matrix_A(math.pi / math.sqrt(2)).matrix, 6))

# Explicit Jacobi fields against finite variations of geodesics.
for kind, field in ((B, jacobi_sinh_X), (A, jacobi_A_sin), (A, jacobi_A_cos)):
    print(field.__name__, f"{jacobi_field_check(kind, field).residual:.1e}")
