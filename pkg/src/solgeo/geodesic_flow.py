"""Geodesic flow of Sol as a Hamiltonian flow on T*Sol.

H(q, p) = (e^{2z} p_x^2 + e^{-2z} p_y^2 + p_z^2) / 2. Since H does not
depend on x or y, p_x and p_y are first integrals; the integrator holds them
fixed and only evolves (x, y, z, p_z).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import (
    ExponentOverflowError,
    NumericalError,
    StiffTrajectoryError,
    ValidationError,
)
from .sol_core import (
    EXP_LIMIT,
    IDENTITY,
    PhaseState,
    SolElement,
    checked_exp,
    f1,
    f2,
    sol_mul,
)

__all__ = [
    "PhaseState",
    "GeodesicType",
    "Trajectory",
    "hamiltonian",
    "hamiltonian_vector_field",
    "flow",
    "flow_to",
    "classify",
    "exact_geodesic",
    "exact_initial_state",
    "type_A_state",
    "oscillation_period",
]

DEFAULT_TOL = 1e-10
UNIT_TOL = 1e-9
# Solver tolerances are tol * SAFETY so the accumulated drift stays below tol.
SAFETY = 0.03


def hamiltonian(state: PhaseState) -> float:
    return state.hamiltonian()


def hamiltonian_vector_field(u) -> np.ndarray:
    """Right-hand side of Hamilton's equations at u = (x, y, z, p_x, p_y, p_z)."""
    _, _, z, px, py, pz = u
    if abs(2 * z) > EXP_LIMIT:
        raise ExponentOverflowError()
    e = math.exp(2 * z)
    return np.array([e * px, py / e, pz, 0.0, 0.0, -e * px * px + py * py / e])


def _reduced_rhs(px: float, py: float) -> Callable:
    def rhs(t, u):
        z = u[2]
        if abs(2 * z) > EXP_LIMIT:
            raise ExponentOverflowError()
        e = math.exp(2 * z)
        return [e * px, py / e, u[3], -e * px * px + py * py / e]

    return rhs


def integrate_system(rhs, y0, T, tol, t_eval=None, dense_output=False, events=None):
    """Run the adaptive Dormand-Prince 8(5,3) pair and translate failures."""
    y0 = np.asarray(y0, dtype=float)
    if not tol > 0:
        raise ValidationError("tol must be positive")
    if T == 0:
        return None
    sol = solve_ivp(
        rhs,
        (0.0, float(T)),
        y0,
        method="DOP853",
        rtol=tol * SAFETY,
        atol=tol * SAFETY,
        t_eval=t_eval,
        dense_output=dense_output,
        events=events,
    )
    if sol.status == -1:
        if "step size" in sol.message.lower():
            raise StiffTrajectoryError()
        raise NumericalError(sol.message)
    return sol


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of the geodesic flow."""

    t: np.ndarray
    positions: np.ndarray  # (N, 3)
    momenta: np.ndarray  # (N, 3)

    @property
    def energy(self) -> np.ndarray:
        z = self.positions[:, 2]
        px, py, pz = self.momenta.T
        return 0.5 * (np.exp(2 * z) * px**2 + np.exp(-2 * z) * py**2 + pz**2)

    @property
    def final(self) -> PhaseState:
        return PhaseState(SolElement.from_array(self.positions[-1]), self.momenta[-1])

    def states(self) -> list[PhaseState]:
        return [
            PhaseState(SolElement.from_array(q), p)
            for q, p in zip(self.positions, self.momenta)
        ]

    def rows(self) -> np.ndarray:
        """Columns t, x, y, z, p_x, p_y, p_z, H."""
        return np.column_stack([self.t, self.positions, self.momenta, self.energy])

    def __len__(self):
        return len(self.t)


def flow(
    state: PhaseState,
    T: float,
    tol: float = DEFAULT_TOL,
    t_eval: Optional[Sequence[float]] = None,
) -> Trajectory:
    """Integrate the geodesic flow from ``state`` for time ``T``.

    Samples are the integrator's accepted steps unless ``t_eval`` is given.
    p_x and p_y are carried through unchanged.
    """
    px, py, pz = state.momentum
    q = state.position
    if T == 0:
        return Trajectory(
            np.array([0.0]), q.as_array()[None, :], state.momentum[None, :].copy()
        )
    sol = integrate_system(
        _reduced_rhs(px, py), [q.x, q.y, q.z, pz], T, tol, t_eval=t_eval
    )
    n = sol.t.size
    positions = sol.y[:3].T.copy()
    momenta = np.column_stack([np.full(n, px), np.full(n, py), sol.y[3]])
    return Trajectory(sol.t.copy(), positions, momenta)


def flow_to(state: PhaseState, T: float, tol: float = DEFAULT_TOL) -> PhaseState:
    """Endpoint of the flow at time ``T``."""
    return flow(state, T, tol, t_eval=[T] if T != 0 else None).final


# --- classification ------------------------------------------------------


@dataclass(frozen=True)
class GeodesicType:
    tag: str  # "A", "B" or "C"
    branch: Optional[str] = None  # "f1" / "f2" for type A
    leaf: Optional[str] = None  # "H'", "H''" or "vertical" for type B
    near_threshold: bool = False

    def __post_init__(self):
        if self.tag not in ("A", "B", "C"):
            raise ValidationError(f"unknown geodesic type {self.tag!r}")
        if self.tag == "A" and self.branch not in ("f1", "f2"):
            raise ValidationError("type A needs branch 'f1' or 'f2'")
        if self.tag == "B" and self.leaf not in ("H'", "H''", "vertical"):
            raise ValidationError("type B needs leaf \"H'\", \"H''\" or 'vertical'")

    def __str__(self):
        if self.tag == "A":
            return f"A({self.branch})"
        if self.tag == "B":
            return f"B({self.leaf})"
        return "C"


_NEAR = 1e-6


def classify(state: PhaseState, tol: float = 1e-10) -> GeodesicType:
    """Type of the geodesic through a unit-speed state.

    Type A when the velocity is horizontal along +-45 degrees in the (X, Y)
    frame, type B when p_x = 0 or p_y = 0, type C otherwise. A state that
    misses A or B by less than 1e-6 is returned as C with ``near_threshold``.
    """
    if abs(2 * state.hamiltonian() - 1.0) > UNIT_TOL:
        raise ValidationError("normalize first")
    px, py, pz = state.momentum
    z = state.position.z
    vx = checked_exp(z) * px  # frame components of the velocity
    vy = checked_exp(-z) * py
    if abs(px) <= tol and abs(py) <= tol:
        return GeodesicType("B", leaf="vertical")
    if abs(py) <= tol:
        return GeodesicType("B", leaf="H'")
    if abs(px) <= tol:
        return GeodesicType("B", leaf="H''")
    a_defect = max(abs(pz), abs(abs(vx) - abs(vy)))
    if a_defect <= tol:
        return GeodesicType("A", branch="f2" if vx * vy > 0 else "f1")
    near = min(a_defect, abs(px), abs(py)) < _NEAR
    if near:
        warnings.warn("state is close to a type A/B threshold; classified C", stacklevel=2)
    return GeodesicType("C", near_threshold=near)


# --- closed forms --------------------------------------------------------


def type_A_state(base: SolElement = IDENTITY, branch: str = "f2", sign: int = 1) -> PhaseState:
    """Unit state at ``base`` with velocity ``sign * f_branch``."""
    if branch not in ("f1", "f2"):
        raise ValidationError("branch must be 'f1' or 'f2'")
    v = (f2 if branch == "f2" else f1)(base) * sign
    return PhaseState.from_velocity(base, v)


def _check_unit_pair(amplitude: float, c0: float):
    if abs(amplitude**2 + c0**2 - 1.0) > 1e-12:
        raise ValidationError("amplitude^2 + c0^2 must equal 1")


def exact_initial_state(
    kind: GeodesicType,
    base: SolElement = IDENTITY,
    amplitude: float = 1.0,
    c0: float = 0.0,
    sign: int = 1,
) -> PhaseState:
    """Initial state of the closed-form geodesic of ``exact_geodesic``."""
    if kind.tag == "A":
        return type_A_state(base, kind.branch, sign)
    if kind.tag != "B":
        raise ValidationError("no closed form for type C geodesics")
    if kind.leaf == "vertical":
        return PhaseState(base, (0.0, 0.0, float(sign)))
    _check_unit_pair(amplitude, c0)
    # velocities at the origin are (a, 0, c0) and (0, b, c0); push forward by base
    if kind.leaf == "H'":
        v = np.array([checked_exp(base.z) * amplitude, 0.0, c0])
    else:
        v = np.array([0.0, checked_exp(-base.z) * amplitude, c0])
    return PhaseState.from_velocity(base, v)


def exact_geodesic(
    kind: GeodesicType,
    t: float,
    base: SolElement = IDENTITY,
    amplitude: float = 1.0,
    c0: float = 0.0,
    sign: int = 1,
) -> SolElement:
    """Closed-form unit-speed geodesic of type A or B starting at ``base``.

    For the hyperbolic leaves the oblique families through the origin are

        H' : a sinh t / (cosh t - c0 sinh t) e1 - ln(cosh t - c0 sinh t) e3
        H'': b sinh t / (cosh t + c0 sinh t) e2 + ln(cosh t + c0 sinh t) e3

    with ``amplitude`` playing the role of a (resp. b); they are left
    translated to ``base``.
    """
    if kind.tag == "A":
        v = (f2 if kind.branch == "f2" else f1)(base) * sign
        return SolElement(base.x + t * v[0], base.y + t * v[1], base.z)
    if kind.tag != "B":
        raise ValidationError("no closed form for type C geodesics")
    if kind.leaf == "vertical":
        return SolElement(base.x, base.y, base.z + sign * t)
    _check_unit_pair(amplitude, c0)
    if abs(t) > EXP_LIMIT:
        raise ExponentOverflowError()
    ch, sh = math.cosh(t), math.sinh(t)
    if kind.leaf == "H'":
        d = ch - c0 * sh
        if d <= 0:
            raise NumericalError("left the chart")
        local = SolElement(amplitude * sh / d, 0.0, -math.log(d))
    else:
        d = ch + c0 * sh
        if d <= 0:
            raise NumericalError("left the chart")
        local = SolElement(0.0, amplitude * sh / d, math.log(d))
    return sol_mul(base, local)


# --- type C oscillation ----------------------------------------------------


@dataclass(frozen=True)
class Oscillation:
    period: float
    z_min: float
    z_max: float
    zero_times: np.ndarray  # zeros of p_z = zdot


def oscillation_period(
    state: PhaseState, tol: float = DEFAULT_TOL, t_max: float = 200.0
) -> Oscillation:
    """Period of z(t) along a type-C geodesic.

    Zeros of zdot = p_z are bracketed by sign changes between accepted steps
    and refined by bisection on the dense output; the period is the spacing
    of zeros with the same crossing direction.
    """
    px, py, pz = state.momentum
    q = state.position
    sol = integrate_system(
        _reduced_rhs(px, py), [q.x, q.y, q.z, pz], t_max, tol, dense_output=True
    )
    t, w = sol.t, sol.y[3]
    roots = []
    for i in range(len(t) - 1):
        if w[i] == 0.0 and i > 0:
            roots.append(t[i])
        elif w[i] * w[i + 1] < 0:
            roots.append(brentq(lambda s: sol.sol(s)[3], t[i], t[i + 1], xtol=1e-14))
        if len(roots) >= 3:
            break
    if len(roots) < 3:
        raise NumericalError("fewer than two oscillations detected; increase t_max")
    z = sol.y[2]
    return Oscillation(
        period=roots[2] - roots[0],
        z_min=float(z.min()),
        z_max=float(z.max()),
        zero_times=np.array(roots),
    )
