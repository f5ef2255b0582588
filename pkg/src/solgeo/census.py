"""Closed geodesics of Sol suspensions.

Type A. A lattice vector with eigencoordinates (a, b) closes the horizontal
line at height z* = ln|a/b| / 2 in direction f2 (ab > 0) or f1 (ab < 0),
after arclength sqrt(2|ab|). Classes v and A v give the same closed geodesic
one period higher (z* + lambda), so the census keeps one representative per
orbit, the one with z* in [0, lambda).

Type B. Vertical closed geodesics of period n sit over the fixed points of
A^n on the torus; there are |det(A^n - I)| of them, each of length n lambda.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .cz_index import morse_bott_type_A
from .elliptic import complete_elliptic_E, complete_elliptic_K, elliptic_length, scaled_elliptic_K
from .errors import DegenerateError, ValidationError
from .geodesic_flow import flow_to, type_A_state
from .lattice_manifolds import (
    SolManifold,
    as_int_matrix,
    build_monodromy,
    det2,
    smith_normal_form,
)
from .sol_core import SolElement

__all__ = [
    "ClosedGeodesic",
    "closed_geodesic_A",
    "type_A_census",
    "canonical_class",
    "type_B_count",
    "enumerate_periodic_points",
    "periodic_point_numerators",
    "type_B_census",
    "choose_scale",
    "shoot_type_A",
    "elliptic_bound_scan",
    "write_csv",
    "read_csv",
    "length_summary",
    "summary_json",
    "EllipticScan",
    "elliptic_length",
    "complete_elliptic_E",
    "complete_elliptic_K",
]

FLOOR = 4 - math.pi
# z* values this close to the orbit boundary lambda belong to the next period
_EDGE = 1e-12


@dataclass(frozen=True)
class ClosedGeodesic:
    type: str
    length: float
    lattice_class: Optional[tuple] = None
    eigencoords: Optional[tuple] = None
    height: Optional[float] = None
    branch: Optional[str] = None
    morse_bott_index: Optional[int] = None
    period: Optional[int] = None
    base_point: Optional[tuple] = None  # Fractions in [0, 1)

    def __post_init__(self):
        if self.type == "A":
            a, b = self.eigencoords
            if a * b == 0:
                raise ValidationError("type-A class must have ab != 0")
        elif self.type == "B":
            if not (isinstance(self.period, int) and self.period > 0):
                raise ValidationError("type-B period must be a positive integer")
        else:
            raise ValidationError("type must be 'A' or 'B'")

    @property
    def direction_sign(self) -> int:
        return 1 if self.eigencoords[0] > 0 else -1

    def csv_row(self) -> dict:
        if self.type == "A":
            cls = f"{self.lattice_class[0]} {self.lattice_class[1]}"
            height, index = repr(self.height), "" if self.morse_bott_index is None else str(self.morse_bott_index)
        else:
            cls = f"{self.period}:{self.base_point[0]} {self.base_point[1]}"
            height, index = "", ""
        return {"type": self.type, "class": cls, "length": repr(self.length), "height": height, "index": index}


def closed_geodesic_A(cls, eigencoords, with_index: bool = True) -> ClosedGeodesic:
    """Type-A closed geodesic of the lattice vector with the given eigencoordinates."""
    a, b = (float(v) for v in eigencoords)
    if a * b == 0 or not (math.isfinite(a) and math.isfinite(b)):
        raise ValidationError("type-A class must have ab != 0")
    length = math.sqrt(2 * abs(a * b))
    index = None
    if with_index:
        try:
            index = morse_bott_type_A(length)
        except DegenerateError:
            index = None
    return ClosedGeodesic(
        type="A",
        length=length,
        lattice_class=tuple(int(v) for v in cls),
        eigencoords=(a, b),
        height=0.5 * math.log(abs(a / b)),
        branch="f2" if a * b > 0 else "f1",
        morse_bott_index=index,
    )


def _require_suspension(M: SolManifold):
    if M.kind != "suspension":
        raise ValidationError("census requires a suspension")


def canonical_class(M: SolManifold, cls) -> tuple:
    """The representative A^k cls whose closing height lies in [0, lambda)."""
    a, b = M.eigencoordinates(cls)
    if a * b == 0:
        raise ValidationError("type-A class must have ab != 0")
    z = 0.5 * math.log(abs(a / b))
    k = math.floor((z + _EDGE) / M.monodromy.lam)
    A = M.monodromy.matrix
    v = as_int_matrix([[int(cls[0])], [int(cls[1])]])
    if k < 0:
        for _ in range(-k):
            v = A.dot(v)
    else:
        Ainv = as_int_matrix([[A[1, 1], -A[0, 1]], [-A[1, 0], A[0, 0]]]) * M.monodromy.det
        for _ in range(k):
            v = Ainv.dot(v)
    return (int(v[0, 0]), int(v[1, 0]))


def _class_box(M: SolManifold, cutoff: float) -> tuple[int, int]:
    # In the fundamental domain |ab| <= q and 1 <= |a/b| < e^{2 lam}, so
    # |a| <= sqrt(q) e^lam and |b| <= sqrt(q); map that box back to Z^2.
    q = cutoff * cutoff / 2
    amax = math.sqrt(q) * math.exp(M.monodromy.lam)
    bmax = math.sqrt(q)
    P = M.monodromy.eigenbasis / M.scale
    rm = abs(P[0, 0]) * amax + abs(P[0, 1]) * bmax
    rn = abs(P[1, 0]) * amax + abs(P[1, 1]) * bmax
    return int(math.floor(rm)) + 1, int(math.floor(rn)) + 1


def _scan_rows(args):
    lattice, lam, cutoff, m_values, rn = args
    out = []
    ns = np.arange(-rn, rn + 1)
    for m in m_values:
        ab = lattice @ np.vstack([np.full(ns.size, m), ns]).astype(float)
        a, b = ab
        prod = a * b
        ok = prod != 0
        with np.errstate(divide="ignore", invalid="ignore"):
            z = 0.5 * np.log(np.abs(a) / np.abs(b))
        ok &= (z >= -_EDGE) & (z < lam - _EDGE) & (2 * np.abs(prod) <= cutoff * cutoff)
        out.extend((int(m), int(n)) for n in ns[ok])
    return out


def type_A_census(M: SolManifold, length_cutoff: float, jobs: int = 1) -> list[ClosedGeodesic]:
    """All type-A closed geodesics of length <= cutoff, one per free homotopy class."""
    _require_suspension(M)
    if not (length_cutoff > 0 and math.isfinite(length_cutoff)):
        raise ValidationError("cutoff must be a positive real")
    rm, rn = _class_box(M, length_cutoff)
    ms = np.arange(-rm, rm + 1)
    lam = M.monodromy.lam
    if jobs > 1:
        chunks = [ms[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(_scan_rows, [(M.lattice, lam, length_cutoff, c, rn) for c in chunks])
            classes = [c for part in parts for c in part]
    else:
        classes = _scan_rows((M.lattice, lam, length_cutoff, ms, rn))
    out = [closed_geodesic_A(c, M.eigencoordinates(c)) for c in classes]
    out.sort(key=lambda g: (g.length, g.lattice_class))
    return out


def shoot_type_A(g: ClosedGeodesic, tol: float = 1e-12) -> float:
    """Integrate the flow from height z* along the closing branch for time
    ``g.length`` and return the distance to the lattice translate (a, b, z*)."""
    start = SolElement(0.0, 0.0, g.height)
    state = type_A_state(start, g.branch, g.direction_sign)
    end = flow_to(state, g.length, tol).position.as_array()
    a, b = g.eigencoords
    return float(np.max(np.abs(end - np.array([a, b, g.height]))))


# --- type B -------------------------------------------------------------------


def _power_minus_identity(A, n: int) -> np.ndarray:
    if not (isinstance(n, (int, np.integer)) and n > 0):
        raise ValidationError("period must be a positive integer")
    build_monodromy(A)
    M = as_int_matrix(A, (2, 2))
    P = as_int_matrix(np.eye(2, dtype=int))
    for _ in range(int(n)):
        P = P.dot(M)
    return P - as_int_matrix(np.eye(2, dtype=int))


def type_B_count(A, n: int) -> int:
    """Number of fixed points of A^n on the torus, |det(A^n - I)|."""
    return abs(det2(_power_minus_identity(A, n)))


def periodic_point_numerators(A, n: int) -> tuple[np.ndarray, int]:
    """Fixed points of A^n as integer numerators over a common denominator N.

    With U (A^n - I) V = diag(d1, d2), the solutions of (A^n - I) x in Z^2
    are x = V (i/d1, j/d2) mod 1. Returns ``(nums, N)`` with N = d2 and
    ``nums`` of shape (d1 d2, 2).
    """
    B = _power_minus_identity(A, n)
    _, D, V = smith_normal_form(B)
    d1, d2 = int(D[0, 0]), int(D[1, 1])
    N = d2
    V = np.array(V, dtype=np.int64) % N
    i = np.repeat(np.arange(d1, dtype=np.int64) * (d2 // d1), d2)
    j = np.tile(np.arange(d2, dtype=np.int64), d1)
    nums = np.column_stack([(V[0, 0] * i + V[0, 1] * j) % N, (V[1, 0] * i + V[1, 1] * j) % N])
    return nums, N


def enumerate_periodic_points(A, n: int) -> list[tuple[Fraction, Fraction]]:
    """Fixed points of A^n on R^2/Z^2 as exact rational pairs in [0, 1)^2."""
    nums, N = periodic_point_numerators(A, n)
    return sorted((Fraction(int(p), N), Fraction(int(q), N)) for p, q in nums)


def type_B_census(M: SolManifold, max_period: int) -> list[ClosedGeodesic]:
    """Vertical closed geodesics of period <= max_period, one per fixed point of A^n."""
    _require_suspension(M)
    out = []
    for n in range(1, max_period + 1):
        for pt in enumerate_periodic_points(M.monodromy.A, n):
            out.append(ClosedGeodesic(type="B", length=n * M.monodromy.lam, period=n, base_point=pt))
    return out


# --- metric scale ----------------------------------------------------------


def choose_scale(M: SolManifold, classes: Sequence) -> float:
    """Largest scale with every class of type-A length at most 4 - pi."""
    classes = list(classes)
    if not classes:
        raise ValidationError("empty Π")
    unit = M.lattice / M.scale
    worst = 0.0
    for c in classes:
        if tuple(int(v) for v in c) == (0, 0):
            raise ValidationError("classes must be nonzero")
        a, b = unit @ np.asarray(c, dtype=float)
        if a * b == 0:
            raise ValidationError("type-A class must have ab != 0")
        worst = max(worst, math.sqrt(2 * abs(a * b)))
    return FLOOR / worst


# --- elliptic floor --------------------------------------------------------


@dataclass(frozen=True)
class EllipticScan:
    points: int
    min_value: float
    argmin_k: float
    min_E: float
    max_scaled_K: float
    floor: float
    tol: float  # quadrature tolerance, the resolution of every comparison

    @property
    def holds(self) -> bool:
        return (
            self.min_E >= 1.0 - self.tol
            and self.max_scaled_K <= math.pi / 2 + 1e-9
            and self.min_value >= self.floor
        )

    def as_dict(self) -> dict:
        d = asdict(self)
        d["holds"] = self.holds
        return d


def elliptic_bound_scan(points: int = 100_000, tol: float = 1e-10) -> EllipticScan:
    """Evaluate E, K sqrt(1 - k^2) and the length floor on a uniform grid of [0, 1]."""
    k = np.linspace(0.0, 1.0, points)
    E = complete_elliptic_E(k, tol)
    Ks = scaled_elliptic_K(k, tol)
    L = 8 / (math.sqrt(2) * np.sqrt(1 + k**2)) * (E - 0.5 * np.sqrt(1 - k**2) * Ks)
    i = int(np.argmin(L))
    return EllipticScan(points, float(L[i]), float(k[i]), float(E.min()), float(Ks.max()), FLOOR, tol)


# --- serialization -------------------------------------------------------

CSV_FIELDS = ["type", "class", "length", "height", "index"]


def write_csv(rows: Iterable[ClosedGeodesic], fh=None) -> str:
    buf = fh if fh is not None else io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for g in rows:
        w.writerow(g.csv_row())
    return buf.getvalue() if fh is None else ""


def read_csv(text: str) -> list[dict]:
    """Parse census CSV back into typed dicts (floats round-trip exactly)."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        rec = {"type": row["type"], "length": float(row["length"])}
        if row["type"] == "A":
            m, n = row["class"].split()
            rec.update(
                lattice_class=(int(m), int(n)),
                height=float(row["height"]),
                index=int(row["index"]) if row["index"] else None,
            )
        else:
            period, pt = row["class"].split(":")
            x, y = pt.split()
            rec.update(period=int(period), base_point=(Fraction(x), Fraction(y)))
        out.append(rec)
    return out


def length_summary(rows: Sequence[ClosedGeodesic], bucket: float = 1.0) -> dict:
    """Counts per type and per length bucket [k*bucket, (k+1)*bucket)."""
    if not bucket > 0:
        raise ValidationError("bucket width must be positive")
    buckets: dict = {}
    by_type: dict = {}
    for g in rows:
        k = int(math.floor(g.length / bucket))
        key = f"[{k * bucket:g}, {(k + 1) * bucket:g})"
        buckets.setdefault(key, {"A": 0, "B": 0})[g.type] += 1
        by_type[g.type] = by_type.get(g.type, 0) + 1
    ordered = dict(sorted(buckets.items(), key=lambda kv: float(kv[0][1:].split(",")[0])))
    return {"total": len(rows), "by_type": by_type, "bucket_width": bucket, "buckets": ordered}


def summary_json(rows: Sequence[ClosedGeodesic], bucket: float = 1.0) -> str:
    return json.dumps(length_summary(rows, bucket), indent=2)
