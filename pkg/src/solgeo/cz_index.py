"""Conley-Zehnder indices of paths in Sp(2, R).

A 2x2 symplectic matrix M factors as P O with P positive symmetric and O a
rotation by theta, and then

    a + d = tr(P) cos(theta),   c - b = tr(P) sin(theta).

Following theta continuously from theta(0) = 0 gives the index: an endpoint
with tr M > 2 contributes 2 round(theta / 2 pi), an endpoint with tr M < 2
contributes 2 floor(theta / 2 pi) + 1. Crossings (tr M = 2) are reported
separately with the signature of the crossing form.

Orientation: ``omega`` fixes which rotation sense counts as positive. The
default [[0, 1], [-1, 0]] makes counterclockwise rotation positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import expm

from .errors import DegenerateError, NumericalError, ValidationError
from .sol_core import SQRT2

DEFAULT_OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])
# generator convention for dV/dt = S J V
J_STD = np.array([[0.0, 1.0], [-1.0, 0.0]])
DET_TOL = 1e-9
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class SymplecticPath:
    t: np.ndarray
    matrices: np.ndarray  # (N, 2, 2)
    generator: Optional[str] = None

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float).ravel()
        M = np.asarray(self.matrices, dtype=float).reshape(-1, 2, 2)
        if t.size != M.shape[0] or t.size < 2:
            raise ValidationError("need at least two samples, one matrix per time")
        if t[0] != 0.0 or np.any(np.diff(t) <= 0):
            raise ValidationError("sample times must start at 0 and increase")
        if not np.array_equal(M[0], np.eye(2)):
            raise ValidationError("M(0) must be the identity")
        dets = M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
        if np.max(np.abs(dets - 1.0)) > DET_TOL:
            raise ValidationError("path leaves Sp(2): det M(t) != 1")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "matrices", M)

    @property
    def T(self) -> float:
        return float(self.t[-1])

    @property
    def end(self) -> np.ndarray:
        return self.matrices[-1]

    def reparametrized(self, phi) -> "SymplecticPath":
        """Same matrices at times phi(t), for an increasing phi with phi(0) = 0."""
        return SymplecticPath(np.asarray([phi(s) for s in self.t]), self.matrices, self.generator)

    def then(self, other: "SymplecticPath") -> "SymplecticPath":
        """Catenation: ``other`` is continued from the end of this path, M(T) * N(s)."""
        t = np.concatenate([self.t, self.T + other.t[1:]])
        M = np.concatenate([self.matrices, other.matrices[1:] @ self.end])
        return SymplecticPath(t, M)


@dataclass(frozen=True)
class IndexResult:
    index: int
    angle: float  # lifted polar angle at T, in the chosen orientation
    crossings: list = field(default_factory=list)  # (t, signature)

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "angle": self.angle,
            "crossings": [{"t": t, "sign": s} for t, s in self.crossings],
        }


def _orientation_sign(omega) -> int:
    W = np.asarray(omega, dtype=float)
    if W.shape != (2, 2) or abs(W[0, 0]) + abs(W[1, 1]) > 0 or W[0, 1] != -W[1, 0] or W[0, 1] == 0:
        raise ValidationError("omega must be a nonzero antisymmetric 2x2 matrix")
    return 1 if W[0, 1] > 0 else -1


def _polar_angles(M: np.ndarray) -> np.ndarray:
    return np.arctan2(M[:, 1, 0] - M[:, 0, 1], M[:, 0, 0] + M[:, 1, 1])


def _crossing_signature(Mc: np.ndarray, dM: np.ndarray, omega: np.ndarray, scale: float) -> int:
    # signature of v -> v^T omega dM M^-1 v on ker(M - I); singular values
    # below the sampling step ``scale`` count as zero
    Q = omega @ dM @ np.linalg.inv(Mc)
    Q = 0.5 * (Q + Q.T)
    _, sv, vt = np.linalg.svd(Mc - np.eye(2))
    small = sv <= scale
    kernel = vt[small] if np.any(small) else vt[-1:]
    return int(np.sum(np.sign(np.linalg.eigvalsh(kernel @ Q @ kernel.T))))


def _crossings(path: SymplecticPath, theta: np.ndarray, omega: np.ndarray) -> list:
    """Interior times where M(t) has eigenvalue 1.

    These are sign changes of tr M - 2, plus passes of the lifted angle
    through a nonzero multiple of 2 pi with tr M - 2 < 0 at both samples
    (M touches a matrix with eigenvalue 1, e.g. a rotation through I).
    """
    t, M = path.t, path.matrices
    g = np.trace(M, axis1=1, axis2=2) - 2.0
    turns = np.floor(theta / (2 * math.pi))
    out = []
    for i in range(1, len(t)):
        lo, hi = g[i - 1], g[i]
        if i == len(t) - 1 and hi == 0:
            break
        if lo * hi < 0 or (hi == 0 and lo != 0):
            s = lo / (lo - hi)
        elif lo < 0 and hi < 0 and turns[i] != turns[i - 1]:
            k = max(turns[i], turns[i - 1]) * 2 * math.pi
            if k == 0:
                continue
            s = (k - theta[i - 1]) / (theta[i] - theta[i - 1])
        else:
            continue
        dt = t[i] - t[i - 1]
        Mc = M[i - 1] + s * (M[i] - M[i - 1])
        step = M[i] - M[i - 1]
        sig = _crossing_signature(Mc, step / dt, omega, 2 * np.linalg.norm(step, 2))
        out.append((float(t[i - 1] + s * dt), sig))
    return out


def cz_index_path(path: SymplecticPath, omega=DEFAULT_OMEGA) -> IndexResult:
    """Conley-Zehnder index of a sampled path with nondegenerate endpoint."""
    sign = _orientation_sign(omega)
    M = path.matrices
    raw = _polar_angles(M)
    steps = np.diff(raw)
    steps = (steps + math.pi) % (2 * math.pi) - math.pi
    if np.any(np.abs(steps) > math.pi / 2):
        raise NumericalError("refine sampling")
    lifted = sign * np.concatenate([[0.0], np.cumsum(steps)])
    theta = float(lifted[-1])
    tr = float(np.trace(path.end))
    if abs(tr - 2.0) <= DEGENERACY_TOL * max(1.0, abs(tr)):
        raise DegenerateError("degenerate: use bott_perturbed_index")
    turns = theta / (2 * math.pi)
    index = 2 * round(turns) if tr > 2 else 2 * math.floor(turns) + 1
    W = sign * DEFAULT_OMEGA
    return IndexResult(int(index), theta, _crossings(path, lifted, W))


# --- closed-form paths --------------------------------------------------------


def _grid(T: float, rate: float, samples: Optional[int]) -> np.ndarray:
    if not (T > 0 and math.isfinite(T)):
        raise ValidationError("T must be a positive real")
    n = samples or max(64, int(math.ceil(8 * rate * T)) + 1)
    return np.linspace(0.0, T, n)


def rotation_path(T: float, speed: float = SQRT2, samples: Optional[int] = None) -> SymplecticPath:
    """The type-A rotation block: [[c, -s/sqrt2], [sqrt2 s, c]] with angle speed*t."""
    t = _grid(T, abs(speed), samples)
    c, s = np.cos(speed * t), np.sin(speed * t)
    M = np.empty((t.size, 2, 2))
    M[:, 0, 0] = c
    M[:, 0, 1] = -s / SQRT2
    M[:, 1, 0] = SQRT2 * s
    M[:, 1, 1] = c
    M[0] = np.eye(2)
    return SymplecticPath(t, M, "rotation")


def hyperbolic_path(T: float, samples: Optional[int] = None) -> SymplecticPath:
    t = _grid(T, 1.0, samples)
    M = np.zeros((t.size, 2, 2))
    M[:, 0, 0] = np.exp(t)
    M[:, 1, 1] = np.exp(-t)
    return SymplecticPath(t, M, "hyperbolic")


def generated_path(S, T: float, samples: Optional[int] = None, shift: float = 0.0) -> SymplecticPath:
    """Solution of dV/dt = (S - shift I) J V, V(0) = I, for symmetric S."""
    S = np.asarray(S, dtype=float)
    if S.shape != (2, 2) or not np.allclose(S, S.T, rtol=0, atol=1e-14):
        raise ValidationError("S must be a symmetric 2x2 matrix")
    G = (S - shift * np.eye(2)) @ J_STD
    t = _grid(T, max(np.linalg.norm(G, 2), 1e-3), samples)
    M = np.array([expm(s * G) for s in t])
    M[0] = np.eye(2)
    return SymplecticPath(t, M, "generated")


UNIPOTENT_S = np.array([[1.0, 0.0], [0.0, 0.0]])
# Orientation in which the generator convention dV/dt = S J V with S = I
# (a pure elliptic block) has index +1.
BOTT_OMEGA = -J_STD


def bott_perturbed_index(
    S, T: float, delta: float = 1e-3, max_halvings: int = 8, omega=BOTT_OMEGA
) -> int:
    """Index of dV/dt = (S - delta I) J V, stabilized by halving delta.

    Returns once two consecutive values of delta give the same index.
    """
    if not delta > 0:
        raise ValidationError("delta must be positive")

    def index_at(d):
        try:
            return cz_index_path(generated_path(S, T, shift=d), omega).index
        except DegenerateError:
            return None

    prev = index_at(delta)
    for _ in range(max_halvings):
        delta /= 2
        cur = index_at(delta)
        if cur is not None and cur == prev:
            return cur
        prev = cur
    raise NumericalError("δ too large")


def morse_bott_type_A(length: float) -> int:
    """Index of a type-A closed geodesic of the given length (frame h1..h4).

    The rotation block turns at angular speed sqrt2 and contributes
    1 + 2 floor(sqrt2 length / 2 pi); the unipotent block contributes 0.
    """
    if not (length > 0 and math.isfinite(length)):
        raise ValidationError("length must be a positive real")
    turns = SQRT2 * length / (2 * math.pi)
    if abs(turns - round(turns)) <= 1e-12 * max(1.0, turns):
        raise DegenerateError("degenerate length")
    return 1 + 2 * math.floor(turns)
