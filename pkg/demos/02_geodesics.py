"""
Three kinds of geodesics
========================

Along a unit-speed geodesic p_x and p_y are constant, and z moves in the
potential e^2z p_x^2 + e^-2z p_y^2. Type A keeps z constant, type B lies in a
vertical leaf, and type C oscillates between two heights.
"""

import math

import numpy as np

from solgeo.geodesic_flow import (
    GeodesicType,
    classify,
    exact_geodesic,
    exact_initial_state,
    flow,
    oscillation_period,
)
from solgeo.sol_core import IDENTITY, PhaseState

states = {
    "A": exact_initial_state(GeodesicType("A", branch="f2")),
    "B": PhaseState(IDENTITY, (0.6, 0.0, 0.8)),
    "C": PhaseState(IDENTITY, (0.5, 0.5, math.sqrt(0.5))).normalize(),
}
for name, st in states.items():
    traj = flow(st, 6.0, t_eval=np.linspace(0, 6, 4))
    print(name, classify(st), np.round(traj.positions[-1], 4), f"drift {np.ptp(traj.energy):.1e}")

# The oblique geodesic in the leaf y = 0 has a closed form.
leaf = GeodesicType("B", leaf="H'")
num = flow(states["B"], 3.0, 1e-12).positions[-1]
print("closed form", np.round(exact_geodesic(leaf, 3.0, amplitude=0.6, c0=0.8).as_array(), 8))
print("integrated ", np.round(num, 8))

# Type C returns to its height after one oscillation.
osc = oscillation_period(states["C"])
print(f"period {osc.period:.5f}, z in [{osc.z_min:.4f}, {osc.z_max:.4f}]")
