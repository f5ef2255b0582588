"""Linearization of the geodesic flow.

The variational system dM/dt = DF(phi_t(u)) M is integrated alongside the
flow in cotangent coordinates (x, y, z, p_x, p_y, p_z). Because Sol acts on
T*Sol by cotangent lifts of left translations, the coordinate monodromy is
also reported left-trivialized: both endpoints are translated back to the
identity, which makes its spectrum comparable with the closed-form frame
matrices even when the geodesic changes height.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ExponentOverflowError, NumericalError
from .geodesic_flow import (
    DEFAULT_TOL,
    GeodesicType,
    PhaseState,
    exact_initial_state,
    flow,
    integrate_system,
)
from .sol_core import (
    EXP_LIMIT,
    IDENTITY,
    SQRT2,
    SolElement,
    checked_exp,
    metric_tensor,
    symplectic_form_matrix,
)

STANDARD_J4 = np.array(
    [[0.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, -1.0, 0.0]]
)


def variational_jacobian(state) -> np.ndarray:
    """Exact Jacobian of Hamilton's equations; rows (xdot, ..., p_zdot)."""
    u = state.as_array() if isinstance(state, PhaseState) else np.asarray(state, dtype=float)
    z, px, py = u[2], u[3], u[4]
    if abs(2 * z) > EXP_LIMIT:
        raise ExponentOverflowError()
    ep = math.exp(2 * z)
    em = 1.0 / ep
    J = np.zeros((6, 6))
    J[0, 2] = 2 * ep * px
    J[0, 3] = ep
    J[1, 2] = -2 * em * py
    J[1, 4] = em
    J[2, 5] = 1.0
    J[5, 2] = -2 * ep * px * px - 2 * em * py * py
    J[5, 3] = -2 * ep * px
    J[5, 4] = 2 * em * py
    return J


def left_trivialization(z: float) -> np.ndarray:
    """Linear part of the cotangent lift of L_g, for g at height ``z``.

    On positions L_g has differential diag(e^z, e^-z, 1); covectors transform
    by the inverse transpose.
    """
    e = checked_exp(z)
    return np.diag([e, 1 / e, 1.0, 1 / e, e, 1.0])


@dataclass(frozen=True)
class Monodromy6:
    matrix: np.ndarray  # coordinate monodromy
    base: PhaseState
    time: float
    end: PhaseState

    @property
    def left_trivialized(self) -> np.ndarray:
        Pt = left_trivialization(self.end.position.z)
        P0 = left_trivialization(self.base.position.z)
        return np.linalg.solve(Pt, self.matrix @ P0)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.left_trivialized)

    @property
    def trace(self) -> float:
        return float(np.trace(self.left_trivialized))

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))

    def tangent_matrix(self) -> np.ndarray:
        """The monodromy in tangent coordinates (x, y, z, xdot, ydot, zdot)."""
        return _cot_to_tan(self.end) @ self.matrix @ _tan_to_cot(self.base)

    def symplectic_defect(self) -> float:
        """max |M^T W(end) M - W(base)| with W the form flat^*(dp ^ dq)."""
        Mt = self.tangent_matrix()
        W0 = symplectic_form_matrix(self.base)
        W1 = symplectic_form_matrix(self.end)
        return float(np.max(np.abs(Mt.T @ W1 @ Mt - W0)))


def _tan_to_cot(state: PhaseState) -> np.ndarray:
    """Differential of flat at ``state``: (dq, dqdot) -> (dq, dp)."""
    z = state.position.z
    v = state.velocity()
    em, ep = checked_exp(-2 * z), checked_exp(2 * z)
    D = np.eye(6)
    D[3, 3] = em
    D[3, 2] = -2 * em * v[0]
    D[4, 4] = ep
    D[4, 2] = 2 * ep * v[1]
    return D


def _cot_to_tan(state: PhaseState) -> np.ndarray:
    return np.linalg.inv(_tan_to_cot(state))


def _variational_rhs(t, u):
    z, px, py, pz = u[2], u[3], u[4], u[5]
    if abs(2 * z) > EXP_LIMIT:
        raise ExponentOverflowError()
    ep = math.exp(2 * z)
    em = 1.0 / ep
    f = [ep * px, em * py, pz, 0.0, 0.0, -ep * px * px + em * py * py]
    M = u[6:].reshape(6, 6)
    J = variational_jacobian(u[:6])
    return np.concatenate([f, (J @ M).ravel()])


def monodromy(state: PhaseState, T: float, tol: float = DEFAULT_TOL) -> Monodromy6:
    """Linearized flow of ``state`` over time ``T``."""
    if T == 0:
        return Monodromy6(np.eye(6), state, 0.0, state)
    y0 = np.concatenate([state.as_array(), np.eye(6).ravel()])
    sol = integrate_system(_variational_rhs, y0, T, tol, t_eval=[T])
    y = sol.y[:, -1]
    end = PhaseState.from_array(
        np.concatenate([y[:3], [state.momentum[0], state.momentum[1], y[5]]])
    )
    return Monodromy6(y[6:].reshape(6, 6), state, float(T), end)


# --- closed-form frame matrices --------------------------------------------


@dataclass(frozen=True)
class FrameMatrix:
    t: float
    matrix: np.ndarray

    def rotation_block(self) -> np.ndarray:
        return self.matrix[2:, 2:]

    def first_block(self) -> np.ndarray:
        return self.matrix[:2, :2]

    def symplectic_defect(self) -> float:
        M = self.matrix
        return float(np.max(np.abs(M.T @ STANDARD_J4 @ M - STANDARD_J4)))


FrameMatrixA = FrameMatrix
FrameMatrixB = FrameMatrix


def frame_matrix_A(t: float) -> FrameMatrix:
    """Linearized flow along a type-A geodesic in the frame (h1, h2, h3, h4)."""
    c, s = math.cos(SQRT2 * t), math.sin(SQRT2 * t)
    M = np.array(
        [
            [1.0, t, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, c, -s / SQRT2],
            [0.0, 0.0, SQRT2 * s, c],
        ]
    )
    return FrameMatrix(float(t), M)


def frame_matrix_B(t: float) -> FrameMatrix:
    """Linearized flow along a vertical geodesic in the frame (g1, g2, g3, g4)."""
    e = checked_exp(t)
    return FrameMatrix(float(t), np.diag([e, 1 / e, 1 / e, e]))


def frame_spectrum_A(T: float) -> np.ndarray:
    """Spectrum of the 6x6 monodromy implied by ``frame_matrix_A``.

    The 4x4 block lives on the contact plane; the flow direction and the
    Liouville direction add two more eigenvalues 1.
    """
    w = np.exp(1j * SQRT2 * T)
    return np.array([1, 1, 1, 1, w, np.conj(w)], dtype=complex)


def frame_spectrum_B(T: float) -> np.ndarray:
    e = math.exp(T)
    return np.array([1, 1, e, e, 1 / e, 1 / e], dtype=complex)


# --- Jacobi fields --------------------------------------------------------


@dataclass(frozen=True)
class JacobiCheck:
    residual: float
    t: np.ndarray
    field: np.ndarray  # claimed field, coordinate components (N, 3)
    variation: np.ndarray  # finite-difference variation (N, 3)


def _flow_positions(state: PhaseState, ts, tol) -> np.ndarray:
    return flow(state, ts[-1], tol, t_eval=ts).positions


def jacobi_field_check(
    kind: GeodesicType,
    field: Callable[[float], np.ndarray],
    *,
    base: SolElement = IDENTITY,
    t_max: float = 3.0,
    h: float = 3e-5,
    samples: int = 61,
    field_derivative: Optional[np.ndarray] = None,
    tol: float = 1e-12,
) -> JacobiCheck:
    """Compare a claimed Jacobi field with a variation through geodesics.

    ``field(t)`` returns the coordinate components of J along the reference
    geodesic of type ``kind`` starting at ``base``. The geodesics with initial
    data (gamma(0) +- h J(0), gamma'(0) +- h J'(0)) are integrated and their
    central difference is compared with J on [0, t_max]. The residual is the
    maximum metric norm of the difference.
    """
    ref = exact_initial_state(kind, base)
    q0 = ref.position.as_array()
    v0 = ref.velocity()
    J0 = np.asarray(field(0.0), dtype=float)
    if field_derivative is None:
        d = 1e-5
        J1 = (np.asarray(field(d)) - np.asarray(field(-d))) / (2 * d)
    else:
        J1 = np.asarray(field_derivative, dtype=float)
    ts = np.linspace(0.0, t_max, samples)
    ts[0] = 0.0
    out = []
    for sgn in (1.0, -1.0):
        q = SolElement.from_array(q0 + sgn * h * J0)
        try:
            st = PhaseState.from_velocity(q, v0 + sgn * h * J1)
            out.append(_flow_positions(st, ts, tol))
        except ExponentOverflowError as exc:
            raise NumericalError("variation left the integrator's domain") from exc
    variation = (out[0] - out[1]) / (2 * h)
    claimed = np.array([field(t) for t in ts], dtype=float)
    # reference geodesic positions for the metric norm
    ref_z = _flow_positions(ref, ts, tol)[:, 2]
    diff = variation - claimed
    res = 0.0
    for z, dv in zip(ref_z, diff):
        g = metric_tensor(SolElement(0.0, 0.0, z))
        res = max(res, math.sqrt(float(dv @ g @ dv)))
    return JacobiCheck(res, ts, claimed, variation)


# Fields along the reference geodesics through the origin.


def jacobi_sinh_X(t: float) -> np.ndarray:
    """sinh(t) X along t -> t e3 (X = e^z d/dx with z = t)."""
    return np.array([math.sinh(t) * math.exp(t), 0.0, 0.0])


def jacobi_sinh_Y(t: float) -> np.ndarray:
    return np.array([0.0, math.sinh(t) * math.exp(-t), 0.0])


_F1_ORIGIN = np.array([1.0, -1.0, 0.0]) / SQRT2
_E3 = np.array([0.0, 0.0, 1.0])


def jacobi_A_sin(t: float) -> np.ndarray:
    """sqrt2 sin(sqrt2 t) f1 + cos(sqrt2 t) e3 along t -> t f2(0)."""
    return SQRT2 * math.sin(SQRT2 * t) * _F1_ORIGIN + math.cos(SQRT2 * t) * _E3


def jacobi_A_cos(t: float) -> np.ndarray:
    """(1 - cos(sqrt2 t)) f1 + sin(sqrt2 t)/sqrt2 e3 along t -> t f2(0)."""
    return (1 - math.cos(SQRT2 * t)) * _F1_ORIGIN + math.sin(SQRT2 * t) / SQRT2 * _E3


def jacobi_A_killing_h1(t: float) -> np.ndarray:
    return _F1_ORIGIN.copy()


def jacobi_A_killing_shear(t: float) -> np.ndarray:
    """t f1 + Z, restriction of a Killing field."""
    return t * _F1_ORIGIN + _E3
