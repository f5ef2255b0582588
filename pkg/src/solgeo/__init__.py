"""Geodesics, closed geodesics and index computations on Sol manifolds."""

from .errors import (
    DegenerateError,
    ExponentOverflowError,
    NumericalError,
    SolGeoError,
    StiffTrajectoryError,
    ValidationError,
)
from .sol_core import IDENTITY, Isometry, PhaseState, SolElement, sol_inverse, sol_mul
from .geodesic_flow import GeodesicType, classify, flow, flow_to
from .linearized_flow import monodromy
from .lattice_manifolds import build_manifold, build_monodromy, homology, smith_normal_form
from .census import (
    choose_scale,
    elliptic_length,
    enumerate_periodic_points,
    type_A_census,
    type_B_count,
)
from .cz_index import bott_perturbed_index, cz_index_path, morse_bott_type_A
from .curve_combinatorics import CurveTree, freedom_budget, is_string_like

__version__ = "0.1.0"
