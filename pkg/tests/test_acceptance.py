"""Acceptance criteria, one test each, with a verdict line per criterion."""

import math
import time

import numpy as np

from oracles import (
    coset_group,
    det2,
    expected_trace_A,
    expected_trace_B,
    hyperbolic_scan,
    integrate_hamilton,
    matpow,
)
from solgeo.census import (
    elliptic_bound_scan,
    periodic_point_numerators,
    shoot_type_A,
    type_A_census,
    type_B_count,
)
from solgeo.cz_index import (
    BOTT_OMEGA,
    UNIPOTENT_S,
    bott_perturbed_index,
    cz_index_path,
    generated_path,
    hyperbolic_path,
    morse_bott_type_A,
    rotation_path,
)
from solgeo.curve_combinatorics import euler_vertex_bound, exhaustive_filter, random_forest
from solgeo.geodesic_flow import GeodesicType, exact_initial_state, flow
from solgeo.lattice_manifolds import build_manifold, build_monodromy, homology
from solgeo.linearized_flow import (
    frame_spectrum_A,
    frame_spectrum_B,
    jacobi_A_cos,
    jacobi_A_sin,
    jacobi_field_check,
    jacobi_sinh_X,
    monodromy,
)
from solgeo.sol_core import PhaseState, SolElement

CAT = [[2, 1], [1, 1]]


def spectrum_error(found, expected):
    """Largest relative distance under a greedy matching of two multisets."""
    rest = list(expected)
    worst = 0.0
    for x in found:
        i = int(np.argmin([abs(x - y) for y in rest]))
        worst = max(worst, abs(x - rest[i]) / max(1.0, abs(rest[i])))
        rest.pop(i)
    return worst


def test_criterion_1_monodromy_traces(report):
    start = time.perf_counter()
    worst_tr = worst_ev = 0.0
    for T in (0.5, 1.0, 2.0, 4.0):
        for kind, trace, spectrum in (
            (GeodesicType("A", branch="f2"), expected_trace_A, frame_spectrum_A),
            (GeodesicType("B", leaf="vertical"), expected_trace_B, frame_spectrum_B),
        ):
            M = monodromy(exact_initial_state(kind), T)
            worst_tr = max(worst_tr, abs(M.trace - trace(T)) / abs(trace(T)))
            worst_ev = max(worst_ev, spectrum_error(M.eigenvalues, spectrum(T)))
    elapsed = time.perf_counter() - start
    ok = worst_tr < 1e-5 and worst_ev < 1e-5 and elapsed < 10
    report(1, "monodromy traces and spectra", ok, f"trace rel {worst_tr:.1e}, eigen rel {worst_ev:.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_2_jacobi_fields(report):
    start = time.perf_counter()
    cases = [
        (GeodesicType("B", leaf="vertical"), jacobi_sinh_X),
        (GeodesicType("A", branch="f2"), jacobi_A_sin),
        (GeodesicType("A", branch="f2"), jacobi_A_cos),
    ]
    residuals = [jacobi_field_check(kind, f, t_max=3.0).residual for kind, f in cases]
    elapsed = time.perf_counter() - start
    ok = max(residuals) < 1e-5 and elapsed < 10
    report(2, "Jacobi fields", ok, f"max residual {max(residuals):.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_3_homology(report):
    start = time.perf_counter()
    scan = hyperbolic_scan(-5, 5)
    mismatches = 0
    for A in scan:
        B = [[A[0][0] - 1, A[0][1]], [A[1][0], A[1][1] - 1]]
        h = homology(build_monodromy(A))
        mismatches += h.H1[1:] != coset_group(B)
        if det2(A) < 0:
            mismatches += not (h.H2 == [2] and h.H3 == [])
    spot = (
        homology(build_monodromy(CAT)).as_strings()["H1"] == "Z"
        and homology(build_monodromy([[3, 2], [1, 1]])).as_strings()["H1"] == "Z + Z/2"
    )
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and spot and elapsed < 30
    report(3, "homology via Smith normal form", ok, f"{len(scan)} matrices, {mismatches} mismatches, {elapsed:.2f}s")
    assert ok


def test_criterion_4_periodic_points(report):
    start = time.perf_counter()
    scan = hyperbolic_scan(-5, 5)
    bad = 0
    for A in scan:
        for n in range(1, 7):
            P = matpow(A, n)
            B = np.array([[P[0][0] - 1, P[0][1]], [P[1][0], P[1][1] - 1]], dtype=np.int64)
            expected = abs(int(B[0, 0]) * int(B[1, 1]) - int(B[0, 1]) * int(B[1, 0]))
            nums, N = periodic_point_numerators(A, n)
            distinct = np.unique(nums[:, 0] * N + nums[:, 1]).size
            solves = np.all((nums @ B.T) % N == 0)
            bad += not (len(nums) == distinct == expected == type_B_count(A, n) and solves)
    cat2 = len(periodic_point_numerators(CAT, 2)[0]) == 5
    elapsed = time.perf_counter() - start
    ok = bad == 0 and cat2 and elapsed < 30
    report(4, "periodic points count |det(A^n - I)|", ok, f"{len(scan)} matrices, n <= 6, {bad} failures, {elapsed:.2f}s")
    assert ok


def test_criterion_5_elliptic_bound(report):
    start = time.perf_counter()
    scan = elliptic_bound_scan(100_000)
    elapsed = time.perf_counter() - start
    near_four = abs(scan.min_value - 4) < 1e-3 and scan.argmin_k > 0.99
    ok = scan.holds and near_four and elapsed < 20
    detail = (
        f"min {scan.min_value:.9f} at k={scan.argmin_k:.5f}, min E {scan.min_E:.15f}, "
        f"max K sqrt(1-k^2) {scan.max_scaled_K:.12f}, {elapsed:.2f}s"
    )
    report(5, "elliptic length floor 4 - pi", ok, detail)
    assert ok


def test_criterion_6_conley_zehnder(report):
    start = time.perf_counter()
    rotation = all(cz_index_path(rotation_path(T)).index == 1 for T in np.linspace(0.05, 4.4, 12))
    deltas = [cz_index_path(generated_path(UNIPOTENT_S, 1.0, shift=d), BOTT_OMEGA).index for d in (1e-3, 5e-4, 2.5e-4)]
    unipotent = deltas == [0, 0, 0] and bott_perturbed_index(UNIPOTENT_S, 1.0, 1e-3) == 0
    hyperbolic = all(cz_index_path(hyperbolic_path(T)).index == 0 for T in (0.5, 2.0, 5.0))
    lengths = np.linspace(1e-3, 4 - math.pi, 20)
    composite = all(
        morse_bott_type_A(L) == 1 == cz_index_path(rotation_path(L)).index + bott_perturbed_index(UNIPOTENT_S, L)
        for L in lengths
    )
    elapsed = time.perf_counter() - start
    ok = rotation and unipotent and hyperbolic and composite and elapsed < 5
    detail = f"rotation {rotation}, unipotent {deltas}, hyperbolic {hyperbolic}, composite {composite}, {elapsed:.2f}s"
    report(6, "Conley-Zehnder indices", ok, detail)
    assert ok


def _oracle_shot(g):
    # full six-dimensional integration from the closing height along the branch
    z = g.height
    s = g.direction_sign / math.sqrt(2)
    ydot_sign = 1 if g.branch == "f2" else -1
    u0 = [0.0, 0.0, z, s * math.exp(-z), ydot_sign * s * math.exp(z), 0.0]
    end = integrate_hamilton(u0, g.length).y[:3, -1]
    a, b = g.eigencoords
    return float(np.max(np.abs(end - np.array([a, b, z]))))


def test_criterion_7_geodesic_shooting(report):
    start = time.perf_counter()
    M = build_manifold(CAT, 1.0)
    census = type_A_census(M, 6.0)
    picked = census[:: max(1, len(census) // 10)][:10]
    errs = [max(shoot_type_A(g), _oracle_shot(g)) for g in picked]
    elapsed = time.perf_counter() - start
    ok = len(picked) == 10 and max(errs) < 1e-6 and elapsed < 30
    report(7, "geodesic shooting closes type-A classes", ok, f"{len(picked)} classes, max miss {max(errs):.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_8_curve_combinatorics(report):
    start = time.perf_counter()
    rng = np.random.default_rng(8)
    failures = 0
    for _ in range(10_000):
        F = random_forest(rng, max_leaves=10)
        rep = euler_vertex_bound(F, 10)
        failures += not (rep.euler_holds and rep.bound_holds)
    filt = exhaustive_filter(max_components=6)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and filt.holds and elapsed < 60
    detail = (
        f"10000 forests, {failures} failures; filter {filt.conclusion_holds}/{filt.admissible} "
        f"admissible of {filt.examined}, {elapsed:.2f}s"
    )
    report(8, "Euler identity, vertex bound and curve filter", ok, detail)
    assert ok


def test_criterion_9_conservation(report):
    start = time.perf_counter()
    rng = np.random.default_rng(9)
    worst_h = worst_p = 0.0
    for _ in range(100):
        q = SolElement(*rng.uniform(-1, 1, 3))
        st = PhaseState(q, rng.normal(size=3)).normalize()
        traj = flow(st, 100.0)
        worst_h = max(worst_h, float(np.max(np.abs(traj.energy - traj.energy[0]))))
        worst_p = max(worst_p, float(np.max(np.abs(traj.momenta[:, :2] - st.momentum[:2]))))
    elapsed = time.perf_counter() - start
    ok = worst_h < 1e-9 and worst_p < 1e-9 and elapsed < 60
    report(9, "energy and (p_x, p_y) conservation", ok, f"energy drift {worst_h:.1e}, momentum drift {worst_p:.1e}, {elapsed:.2f}s")
    assert ok
