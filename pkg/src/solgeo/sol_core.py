"""The group Sol, its left-invariant metric, and the symplectic form on TSol.

Sol is R^2 semidirect R with the law

    (a, b, c) . (x, y, z) = (e^c x + a, e^-c y + b, z + c),

and carries the left-invariant metric e^{-2z} dx^2 + e^{2z} dy^2 + dz^2, for
which the frame X = e^z d/dx, Y = e^-z d/dy, Z = d/dz is orthonormal.
Coordinates are global; every function here is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .errors import ExponentOverflowError, ValidationError

# exp() of anything larger overflows a double.
EXP_LIMIT = 709.0

SQRT2 = math.sqrt(2.0)


def checked_exp(v: float) -> float:
    if not abs(v) <= EXP_LIMIT:
        raise ExponentOverflowError()
    return math.exp(v)


def checked_exp_array(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if not np.all(np.abs(v) <= EXP_LIMIT):
        raise ExponentOverflowError()
    return np.exp(v)


@dataclass(frozen=True)
class SolElement:
    """A point (equivalently a group element) of Sol."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValidationError(f"coordinate {name} is not finite")
            object.__setattr__(self, name, v)

    @classmethod
    def from_array(cls, a: Sequence[float]) -> "SolElement":
        x, y, z = (float(c) for c in a)
        return cls(x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z


IDENTITY = SolElement(0.0, 0.0, 0.0)
E1 = SolElement(1.0, 0.0, 0.0)
E2 = SolElement(0.0, 1.0, 0.0)
E3 = SolElement(0.0, 0.0, 1.0)


def _group_law(g, h, exp: Callable = math.exp):
    # Shared by sol_mul and the symbolic tests (exp=sympy.exp).
    gx, gy, gz = g
    hx, hy, hz = h
    return (exp(gz) * hx + gx, exp(-gz) * hy + gy, hz + gz)


def sol_mul(g: SolElement, h: SolElement) -> SolElement:
    checked_exp(g.z)
    return SolElement(*_group_law(tuple(g), tuple(h)))


def sol_inverse(g: SolElement) -> SolElement:
    return SolElement(-checked_exp(-g.z) * g.x, -checked_exp(g.z) * g.y, -g.z)


def sol_commutator(g: SolElement, h: SolElement) -> SolElement:
    """Group commutator g h g^-1 h^-1."""
    return sol_mul(sol_mul(sol_mul(g, h), sol_inverse(g)), sol_inverse(h))


def left_translation_differential(g: SolElement) -> np.ndarray:
    """Jacobian of h -> g.h; constant in h."""
    return np.diag([checked_exp(g.z), checked_exp(-g.z), 1.0])


def metric_tensor(p: SolElement) -> np.ndarray:
    return np.diag([checked_exp(-2 * p.z), checked_exp(2 * p.z), 1.0])


def inner_product(p: SolElement, u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    ex = checked_exp(-2 * p.z)
    ey = checked_exp(2 * p.z)
    return float(ex * u[0] * v[0] + ey * u[1] * v[1] + u[2] * v[2])


def norm(p: SolElement, u) -> float:
    return math.sqrt(inner_product(p, u, u))


def frame(p: SolElement) -> np.ndarray:
    """Columns are the coordinate components of X, Y, Z at ``p``."""
    return np.diag([checked_exp(p.z), checked_exp(-p.z), 1.0])


def f1(p: SolElement) -> np.ndarray:
    """(X - Y)/sqrt(2) at ``p``."""
    return np.array([checked_exp(p.z), -checked_exp(-p.z), 0.0]) / SQRT2


def f2(p: SolElement) -> np.ndarray:
    """(X + Y)/sqrt(2) at ``p``."""
    return np.array([checked_exp(p.z), checked_exp(-p.z), 0.0]) / SQRT2


@dataclass(frozen=True, eq=False)
class TangentVector:
    base: SolElement
    components: np.ndarray

    def __post_init__(self):
        c = np.array(self.components, dtype=float).reshape(3)
        c.setflags(write=False)
        object.__setattr__(self, "components", c)

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and self.base == other.base
            and np.array_equal(self.components, other.components)
        )

    __hash__ = None

    def norm(self) -> float:
        return norm(self.base, self.components)


@dataclass(frozen=True, eq=False)
class CotangentVector:
    base: SolElement
    components: np.ndarray

    def __post_init__(self):
        c = np.array(self.components, dtype=float).reshape(3)
        c.setflags(write=False)
        object.__setattr__(self, "components", c)

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and self.base == other.base
            and np.array_equal(self.components, other.components)
        )

    __hash__ = None

    def norm(self) -> float:
        px, py, pz = self.components
        z = self.base.z
        return math.sqrt(checked_exp(2 * z) * px**2 + checked_exp(-2 * z) * py**2 + pz**2)


def flat(v: TangentVector) -> CotangentVector:
    z = v.base.z
    vx, vy, vz = v.components
    return CotangentVector(v.base, (checked_exp(-2 * z) * vx, checked_exp(2 * z) * vy, vz))


def sharp(w: CotangentVector) -> TangentVector:
    z = w.base.z
    px, py, pz = w.components
    return TangentVector(w.base, (checked_exp(2 * z) * px, checked_exp(-2 * z) * py, pz))


@dataclass(frozen=True, eq=False)
class PhaseState:
    """A point of T*Sol: base point plus momentum covector (p_x, p_y, p_z)."""

    position: SolElement
    momentum: np.ndarray

    def __post_init__(self):
        if not isinstance(self.position, SolElement):
            object.__setattr__(self, "position", SolElement.from_array(self.position))
        m = np.array(self.momentum, dtype=float).reshape(3)
        if not np.all(np.isfinite(m)):
            raise ValidationError("momentum is not finite")
        m.setflags(write=False)
        object.__setattr__(self, "momentum", m)

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and self.position == other.position
            and np.array_equal(self.momentum, other.momentum)
        )

    __hash__ = None

    @classmethod
    def from_array(cls, a: Sequence[float]) -> "PhaseState":
        a = np.asarray(a, dtype=float).reshape(6)
        return cls(SolElement.from_array(a[:3]), a[3:])

    @classmethod
    def from_velocity(cls, position: SolElement, velocity) -> "PhaseState":
        return cls(position, flat(TangentVector(position, velocity)).components)

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.position.as_array(), self.momentum])

    def covector(self) -> CotangentVector:
        return CotangentVector(self.position, self.momentum)

    def velocity(self) -> np.ndarray:
        return sharp(self.covector()).components

    def hamiltonian(self) -> float:
        return 0.5 * self.covector().norm() ** 2

    def normalize(self) -> "PhaseState":
        n = self.covector().norm()
        if n == 0.0:
            raise ValidationError("cannot normalize the zero covector")
        return PhaseState(self.position, self.momentum / n)

    def with_momentum(self, momentum) -> "PhaseState":
        return PhaseState(self.position, momentum)


# --- isometries -----------------------------------------------------------


@dataclass(frozen=True)
class Rho:
    """(x, y, z) -> (y, -x, -z), order 4."""


@dataclass(frozen=True)
class RY:
    """(x, y, z) -> (-x, y, z), order 2."""


@dataclass(frozen=True)
class LeftTranslation:
    g: SolElement


@dataclass(frozen=True)
class Deck:
    """(x, y, z) -> (eps1 e^lam x, eps2 e^-lam y, z + lam)."""

    lam: float
    eps1: int = 1
    eps2: int = 1

    def __post_init__(self):
        if self.eps1 not in (1, -1) or self.eps2 not in (1, -1):
            raise ValidationError("deck signs must be +1 or -1")


Generator = Union[Rho, RY, LeftTranslation, Deck]


def _apply_generator(gen: Generator, p: SolElement) -> SolElement:
    if isinstance(gen, Rho):
        return SolElement(p.y, -p.x, -p.z)
    if isinstance(gen, RY):
        return SolElement(-p.x, p.y, p.z)
    if isinstance(gen, LeftTranslation):
        return sol_mul(gen.g, p)
    if isinstance(gen, Deck):
        return SolElement(
            gen.eps1 * checked_exp(gen.lam) * p.x,
            gen.eps2 * checked_exp(-gen.lam) * p.y,
            p.z + gen.lam,
        )
    raise ValidationError(f"unknown isometry generator {gen!r}")


@dataclass(frozen=True)
class Isometry:
    """A finite word in the generators, applied left to right."""

    word: tuple = ()

    @classmethod
    def rho(cls) -> "Isometry":
        return cls((Rho(),))

    @classmethod
    def r_y(cls) -> "Isometry":
        return cls((RY(),))

    @classmethod
    def r_x(cls) -> "Isometry":
        # r_X = rho^2 r_Y
        return cls((RY(), Rho(), Rho()))

    @classmethod
    def translation(cls, g: SolElement) -> "Isometry":
        return cls((LeftTranslation(g),))

    @classmethod
    def deck(cls, lam: float, eps1: int = 1, eps2: int = 1) -> "Isometry":
        return cls((Deck(lam, eps1, eps2),))

    def then(self, other: "Isometry") -> "Isometry":
        """The isometry applying ``self`` first, then ``other``."""
        return Isometry(self.word + other.word)

    def power(self, n: int) -> "Isometry":
        if n < 0:
            raise ValidationError("negative powers are not represented")
        return Isometry(self.word * n)

    def __call__(self, g: SolElement) -> SolElement:
        return isometry_apply(self, g)


def isometry_apply(iso: Isometry, g: SolElement) -> SolElement:
    for gen in iso.word:
        g = _apply_generator(gen, g)
    return g


def isometry_differential(iso: Isometry, p: SolElement, h: float = 1e-6) -> np.ndarray:
    """Central finite-difference Jacobian of ``iso`` at ``p``."""
    base = p.as_array()
    jac = np.empty((3, 3))
    for j in range(3):
        d = np.zeros(3)
        d[j] = h
        plus = isometry_apply(iso, SolElement.from_array(base + d)).as_array()
        minus = isometry_apply(iso, SolElement.from_array(base - d)).as_array()
        jac[:, j] = (plus - minus) / (2 * h)
    return jac


# --- symplectic form on TSol ---------------------------------------------


def _tangent_data(state) -> tuple[float, float, float]:
    if isinstance(state, PhaseState):
        v = state.velocity()
        return state.position.z, v[0], v[1]
    if isinstance(state, TangentVector):
        return state.base.z, state.components[0], state.components[1]
    raise ValidationError("expected a PhaseState or TangentVector")


def symplectic_form_matrix(state) -> np.ndarray:
    """Matrix of flat^*(dp ^ dq) in coordinates (x, y, z, xdot, ydot, zdot).

    The returned ``W`` satisfies ``omega(w1, w2) = w1 @ W @ w2``.
    """
    z, xd, yd = _tangent_data(state)
    em = checked_exp(-2 * z)
    ep = checked_exp(2 * z)
    W = np.zeros((6, 6))

    def add(i, j, c):
        # c * (dw_i ^ dw_j)
        W[i, j] += c
        W[j, i] -= c

    add(2, 0, -2 * em * xd)
    add(3, 0, em)
    add(2, 1, 2 * ep * yd)
    add(4, 1, ep)
    add(5, 2, 1.0)
    return W


def symplectic_form_value(state, w1, w2) -> float:
    W = symplectic_form_matrix(state)
    return float(np.asarray(w1, dtype=float) @ W @ np.asarray(w2, dtype=float))
