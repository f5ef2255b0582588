"""Closed Sol manifolds: suspensions of hyperbolic toral maps and sapphires.

A hyperbolic A in GL2(Z) has eigenvalues eps1 e^lam and eps2 e^-lam. Writing
Z^2 in an eigenbasis P of A identifies it with a lattice Lambda0 of the
fiber K = {z = 0} of Sol, invariant under diag(eps1 e^lam, eps2 e^-lam); the
suspension of A is the quotient of Sol by Lambda0 and the deck map
(x, y, z) -> (eps1 e^lam x, eps2 e^-lam y, z + lam).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import SolGeoError, ValidationError
from .sol_core import Isometry

IntMatrix = Sequence[Sequence[int]]


def as_int_matrix(M, shape=None) -> np.ndarray:
    """Copy ``M`` into an object array of Python ints (exact arithmetic)."""
    arr = np.array(M, dtype=object)
    if arr.ndim != 2:
        raise ValidationError("expected a 2-d integer matrix")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        if isinstance(v, (bool, np.bool_)):
            raise ValidationError("matrix entries must be integers")
        iv = int(v)
        if iv != v:
            raise ValidationError("matrix entries must be integers")
        out[idx] = iv
    if shape is not None and out.shape != shape:
        raise ValidationError(f"expected a {shape[0]}x{shape[1]} matrix")
    return out


def det2(M) -> int:
    return int(M[0][0]) * int(M[1][1]) - int(M[0][1]) * int(M[1][0])


# --- Smith normal form ------------------------------------------------------


def smith_normal_form(M: IntMatrix):
    """Smith normal form of an integer matrix.

    Returns ``(U, D, V)`` with ``U @ M @ V == D``, ``U`` and ``V`` unimodular
    and ``D`` diagonal with nonnegative entries ``d1 | d2 | ...`` (zeros
    last). Entries are Python ints held in object arrays.
    """
    A = as_int_matrix(M)
    m, n = A.shape
    U = as_int_matrix(np.eye(m, dtype=int))
    V = as_int_matrix(np.eye(n, dtype=int))

    def swap_rows(i, j):
        A[[i, j]] = A[[j, i]]
        U[[i, j]] = U[[j, i]]

    def swap_cols(i, j):
        A[:, [i, j]] = A[:, [j, i]]
        V[:, [i, j]] = V[:, [j, i]]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero entry of the trailing block becomes the pivot
            block = [(abs(A[i, j]), i, j) for i in range(t, m) for j in range(t, n) if A[i, j] != 0]
            if not block:
                break
            _, i, j = min(block)
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t, t]
            dirty = False
            for i in range(t + 1, m):
                q = A[i, t] // p
                if q:
                    A[i] = A[i] - q * A[t]
                    U[i] = U[i] - q * U[t]
                dirty |= A[i, t] != 0
            for j in range(t + 1, n):
                q = A[t, j] // p
                if q:
                    A[:, j] = A[:, j] - q * A[:, t]
                    V[:, j] = V[:, j] - q * V[:, t]
                dirty |= A[t, j] != 0
            if dirty:
                continue
            bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i, j] % p]
            if bad:
                i, _ = bad[0]
                A[t] = A[t] + A[i]
                U[t] = U[t] + U[i]
                continue
            break
        if A[t, t] < 0:
            A[t] = -A[t]
            U[t] = -U[t]
    return U, A, V


def invariant_factors(M: IntMatrix) -> list[int]:
    _, D, _ = smith_normal_form(M)
    k = min(D.shape)
    return [int(D[i, i]) for i in range(k)]


# --- hyperbolic monodromies ----------------------------------------------


def is_hyperbolic(A: IntMatrix) -> bool:
    d = det2(A)
    tr = int(A[0][0]) + int(A[1][1])
    if d == 1:
        return abs(tr) > 2
    if d == -1:
        return tr != 0
    return False


def _unit_eigenvector(a, b, c, d, mu) -> np.ndarray:
    # rows of A - mu I are (a - mu, b) and (c, d - mu); each gives a kernel vector
    cand1 = np.array([b, mu - a], dtype=float)
    cand2 = np.array([mu - d, c], dtype=float)
    v = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
    v = v / np.linalg.norm(v)
    first = v[0] if v[0] != 0 else v[1]
    return -v if first < 0 else v


@dataclass(frozen=True)
class HyperbolicMonodromy:
    A: tuple
    det: int
    trace: int
    lam: float
    eps1: int
    eps2: int
    eigenvalues: tuple  # (eps1 e^lam, eps2 e^-lam)
    eigenbasis: np.ndarray = field(repr=False)  # columns are eigenvectors

    @property
    def matrix(self) -> np.ndarray:
        return as_int_matrix(self.A)

    def eigencoordinates(self, v) -> np.ndarray:
        """Coordinates of ``v`` in the eigenbasis."""
        return np.linalg.solve(self.eigenbasis, np.asarray(v, dtype=float))

    def power(self, n: int) -> np.ndarray:
        M = as_int_matrix(np.eye(2, dtype=int))
        for _ in range(n):
            M = M.dot(self.matrix)
        return M


def build_monodromy(A: IntMatrix) -> HyperbolicMonodromy:
    M = as_int_matrix(A, (2, 2))
    d = det2(M)
    if d not in (1, -1):
        raise ValidationError("not in GL₂(ℤ)")
    if not is_hyperbolic(M):
        raise ValidationError("monodromy not hyperbolic")
    a, b, c, dd = (int(v) for v in M.ravel())
    tr = a + dd
    disc = math.sqrt(tr * tr - 4 * d)
    mu1 = (tr + math.copysign(disc, tr)) / 2
    mu2 = d / mu1
    P = np.column_stack([_unit_eigenvector(a, b, c, dd, mu) for mu in (mu1, mu2)])
    return HyperbolicMonodromy(
        A=tuple(tuple(int(v) for v in row) for row in M),
        det=d,
        trace=tr,
        lam=math.log(abs(mu1)),
        eps1=1 if mu1 > 0 else -1,
        eps2=1 if mu2 > 0 else -1,
        eigenvalues=(mu1, mu2),
        eigenbasis=P,
    )


# --- homology -------------------------------------------------------------

# Groups are lists of invariant factors; 0 stands for a free summand Z.


def format_group(factors: Sequence[int]) -> str:
    parts = ["Z" if f == 0 else f"Z/{f}" for f in factors if f != 1]
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class HomologyReport:
    H0: list
    H1: list
    H2: list
    H3: list
    torsion_order: int

    def as_strings(self) -> dict:
        return {f"H{i}": format_group(getattr(self, f"H{i}")) for i in range(4)}


class NotComputedError(SolGeoError):
    pass


def _monodromy_of(m) -> HyperbolicMonodromy:
    if isinstance(m, SolManifold):
        if m.kind == "sapphire":
            raise NotComputedError("not computed: sapphire homology has no recipe here")
        return m.monodromy
    return m


def homology(m) -> HomologyReport:
    """Integral homology of the suspension of a hyperbolic toral map."""
    mono = _monodromy_of(m)
    B = mono.matrix - as_int_matrix(np.eye(2, dtype=int))
    torsion = [f for f in invariant_factors(B) if f != 1]
    order = abs(det2(B))
    if mono.det > 0:
        H2, H3 = [0], [0]
    else:
        H2, H3 = [2], []
    return HomologyReport(H0=[0], H1=[0] + torsion, H2=H2, H3=H3, torsion_order=order)


def fiber_translation_group_order(m) -> int:
    """Order of the group of fiber translations (A - I)^-1(Lambda0)/Lambda0."""
    mono = _monodromy_of(m)
    return abs(det2(mono.matrix - as_int_matrix(np.eye(2, dtype=int))))


# --- manifolds --------------------------------------------------------------


@dataclass(frozen=True)
class SolManifold:
    kind: str  # "suspension" or "sapphire"
    monodromy: HyperbolicMonodromy
    scale: float
    lattice: np.ndarray = field(repr=False)  # columns: eigencoordinates of the Z^2 basis, times scale
    deck: Isometry = field(repr=False)
    note: Optional[str] = None

    def eigencoordinates(self, cls) -> np.ndarray:
        """Position in K of the lattice class ``cls`` = (m, n)."""
        return self.lattice @ np.asarray(cls, dtype=float)

    def invariance_defect(self) -> float:
        """Distance of diag(mu1, mu2) Lambda0 from Lambda0 A (zero when invariant)."""
        mu1, mu2 = self.monodromy.eigenvalues
        lhs = np.diag([mu1, mu2]) @ self.lattice
        rhs = self.lattice @ self.monodromy.matrix.astype(float)
        return float(np.max(np.abs(lhs - rhs)))


_KINDS = ("suspension", "sapphire")


def build_manifold(A: IntMatrix, scale: float = 1.0, kind: str = "suspension") -> SolManifold:
    if kind not in _KINDS:
        raise ValidationError(f"kind must be one of {_KINDS}")
    if not (scale > 0 and math.isfinite(scale)):
        raise ValidationError("scale must be a positive real")
    mono = build_monodromy(A)
    lattice = scale * np.linalg.inv(mono.eigenbasis)
    deck = Isometry.deck(mono.lam, mono.eps1, mono.eps2)
    note = "involution not modeled" if kind == "sapphire" else None
    return SolManifold(kind, mono, float(scale), lattice, deck, note)
