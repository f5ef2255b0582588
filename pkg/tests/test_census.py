import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import det2, hyperbolic_scan, matpow, periodic_points_grid
from solgeo.census import (
    FLOOR,
    ClosedGeodesic,
    canonical_class,
    choose_scale,
    closed_geodesic_A,
    enumerate_periodic_points,
    length_summary,
    periodic_point_numerators,
    read_csv,
    shoot_type_A,
    summary_json,
    type_A_census,
    type_B_census,
    type_B_count,
    write_csv,
)
from solgeo.errors import ValidationError
from solgeo.lattice_manifolds import build_manifold

CAT = [[2, 1], [1, 1]]
FIB = [[1, 1], [1, 0]]


@pytest.fixture(scope="module")
def cat():
    return build_manifold(CAT, 1.0)


@pytest.fixture(scope="module")
def cat_census(cat):
    return type_A_census(cat, 6.0)


# --- type A -----------------------------------------------------------------


def test_synthetic_unit_class():
    g = closed_geodesic_A((1, 0), (1.0, 1.0))
    assert g.length == pytest.approx(math.sqrt(2), abs=1e-15)
    assert g.height == 0 and g.branch == "f2"
    assert shoot_type_A(g) < 1e-6


def test_branch_and_direction():
    g = closed_geodesic_A((1, 0), (-0.5, 2.0))
    assert g.branch == "f1" and g.direction_sign == -1
    assert g.height == pytest.approx(0.5 * math.log(0.25))
    assert shoot_type_A(g) < 1e-6


def test_doubling_class_doubles_length(cat):
    for cls in [(1, 0), (2, -1), (3, 5)]:
        g1 = closed_geodesic_A(cls, cat.eigencoordinates(cls))
        g2 = closed_geodesic_A(2 * np.array(cls), cat.eigencoordinates(2 * np.array(cls)))
        assert g2.length == pytest.approx(2 * g1.length, rel=1e-14)


def test_census_sorted_and_below_cutoff(cat_census):
    lengths = [g.length for g in cat_census]
    assert lengths == sorted(lengths)
    assert 0 < lengths[0] and lengths[-1] <= 6.0


def test_census_symmetric(cat_census):
    classes = {g.lattice_class: g.length for g in cat_census}
    for (m, n), L in classes.items():
        assert classes[(-m, -n)] == pytest.approx(L, rel=1e-14)


def test_census_heights_in_fundamental_domain(cat, cat_census):
    lam = cat.monodromy.lam
    for g in cat_census:
        assert 0 <= g.height + 1e-12 < lam
        assert canonical_class(cat, g.lattice_class) == g.lattice_class


def test_census_invariants(cat_census):
    for g in cat_census:
        a, b = g.eigencoords
        assert g.length == pytest.approx(math.sqrt(2 * abs(a * b)), rel=1e-15)
        assert g.morse_bott_index == 1 + 2 * math.floor(math.sqrt(2) * g.length / (2 * math.pi))


def test_census_complete_against_brute_force(cat, cat_census):
    cutoff = 6.0
    found = {g.lattice_class for g in cat_census}
    R = 25
    missed = []
    for m in range(-R, R + 1):
        for n in range(-R, R + 1):
            if (m, n) == (0, 0):
                continue
            a, b = cat.eigencoordinates((m, n))
            if math.sqrt(2 * abs(a * b)) <= cutoff - 1e-9 and canonical_class(cat, (m, n)) not in found:
                missed.append((m, n))
    assert missed == []


def test_completeness_other_monodromies():
    for A, eps in [(FIB, 1.0), ([[3, 2], [1, 1]], 0.5), ([[-3, 1], [-1, 0]], 2.0)]:
        M = build_manifold(A, eps)
        found = {g.lattice_class for g in type_A_census(M, 4.0)}
        for m in range(-30, 31):
            for n in range(-30, 31):
                if (m, n) == (0, 0):
                    continue
                a, b = M.eigencoordinates((m, n))
                if math.sqrt(2 * abs(a * b)) <= 4.0 - 1e-9:
                    assert canonical_class(M, (m, n)) in found


def test_parallel_matches_serial(cat, cat_census):
    par = type_A_census(cat, 6.0, jobs=2)
    assert [g.lattice_class for g in par] == [g.lattice_class for g in cat_census]


def test_shooting_on_census(cat_census):
    for g in cat_census[:10]:
        assert shoot_type_A(g) < 1e-6


def test_sapphire_rejected():
    S = build_manifold(FIB, 1.0, kind="sapphire")
    with pytest.raises(ValidationError, match="census requires a suspension"):
        type_A_census(S, 3.0)
    with pytest.raises(ValidationError, match="census requires a suspension"):
        type_B_census(S, 2)


def test_bad_cutoff(cat):
    with pytest.raises(ValidationError):
        type_A_census(cat, -1.0)


def test_zero_product_rejected():
    with pytest.raises(ValidationError):
        closed_geodesic_A((1, 0), (1.0, 0.0))


# --- type B -----------------------------------------------------------------


def test_type_B_examples():
    assert type_B_count(CAT, 1) == 1
    assert type_B_count(CAT, 2) == 5
    assert type_B_count(FIB, 1) == 1
    assert enumerate_periodic_points(CAT, 1) == [(Fraction(0), Fraction(0))]
    pts = enumerate_periodic_points(CAT, 2)
    assert len(pts) == 5
    assert pts == periodic_points_grid(CAT, 2)


def test_points_match_grid_oracle():
    for A in hyperbolic_scan(-2, 2):
        for n in (1, 2, 3):
            P = matpow(A, n)
            N = abs(det2([[P[0][0] - 1, P[0][1]], [P[1][0], P[1][1] - 1]]))
            if N <= 400:
                assert enumerate_periodic_points(A, n) == periodic_points_grid(A, n)


def _solves(A, n, nums, N):
    P = np.array(matpow(A, n), dtype=object)
    B = P - np.eye(2, dtype=int)
    image = np.asarray(nums, dtype=object) @ B.T
    return bool(np.all(image % N == 0))


def test_counts_on_scan_up_to_six():
    for A in hyperbolic_scan(-3, 3):
        for n in range(1, 7):
            nums, N = periodic_point_numerators(A, n)
            P = matpow(A, n)
            expected = abs(det2([[P[0][0] - 1, P[0][1]], [P[1][0], P[1][1] - 1]]))
            assert type_B_count(A, n) == expected
            assert len(nums) == expected
            assert len({tuple(r) for r in nums.tolist()}) == expected
            assert _solves(A, n, nums, N)


def test_periodic_points_form_group():
    for A in hyperbolic_scan(-2, 2)[::3]:
        for n in (2, 3):
            nums, N = periodic_point_numerators(A, n)
            pts = {tuple(r) for r in nums.tolist()}
            for p in list(pts)[:15]:
                for q in list(pts)[:15]:
                    assert ((p[0] + q[0]) % N, (p[1] + q[1]) % N) in pts
                assert ((-p[0]) % N, (-p[1]) % N) in pts


def test_type_B_census(cat):
    rows = type_B_census(cat, 3)
    assert [g.period for g in rows].count(2) == 5
    lam = cat.monodromy.lam
    assert all(g.length == pytest.approx(g.period * lam) for g in rows)


def test_bad_period():
    with pytest.raises(ValidationError):
        type_B_count(CAT, 0)


# --- metric scale -------------------------------------------------------------


def test_choose_scale_unit_length():
    M = build_manifold(CAT, 1.0)
    a, b = M.eigencoordinates((1, 0))
    unit = math.sqrt(2 * abs(a * b))
    eps = choose_scale(M, [(1, 0)])
    assert eps * unit == pytest.approx(FLOOR, rel=1e-14)
    assert FLOOR == pytest.approx(0.858407, abs=1e-6)


def test_choose_scale_doubling(cat):
    pi = [(1, 0), (2, 3), (-1, 4)]
    assert choose_scale(cat, [2 * np.array(c) for c in pi]) == pytest.approx(choose_scale(cat, pi) / 2, rel=1e-14)


def test_choose_scale_confirmed_by_census(cat):
    pi = [(1, 0), (0, 1), (3, -2), (5, 7)]
    eps = choose_scale(cat, pi)
    scaled = build_manifold(CAT, eps)
    for c in pi:
        g = closed_geodesic_A(c, scaled.eigencoordinates(c))
        assert g.length <= FLOOR + 1e-12
        assert g.morse_bott_index == 1
    census = {g.lattice_class: g for g in type_A_census(scaled, FLOOR + 1e-9)}
    for c in pi:
        assert canonical_class(scaled, c) in census


def test_choose_scale_independent_of_current_scale():
    pi = [(1, 1), (2, -5)]
    assert choose_scale(build_manifold(CAT, 0.3), pi) == pytest.approx(choose_scale(build_manifold(CAT, 1.0), pi))


def test_choose_scale_errors(cat):
    with pytest.raises(ValidationError, match="empty"):
        choose_scale(cat, [])
    with pytest.raises(ValidationError, match="nonzero"):
        choose_scale(cat, [(0, 0)])


# --- serialization -------------------------------------------------------------


def test_csv_round_trip(cat, cat_census):
    rows = cat_census + type_B_census(cat, 2)
    back = read_csv(write_csv(rows))
    assert len(back) == len(rows)
    for g, r in zip(rows, back):
        assert r["type"] == g.type and r["length"] == g.length
        if g.type == "A":
            assert r["lattice_class"] == g.lattice_class and r["height"] == g.height
            assert r["index"] == g.morse_bott_index
        else:
            assert r["period"] == g.period and r["base_point"] == g.base_point


def test_length_summary(cat_census):
    s = length_summary(cat_census, 2.0)
    assert s["total"] == len(cat_census) == s["by_type"]["A"]
    assert sum(v["A"] for v in s["buckets"].values()) == len(cat_census)
    assert '"bucket_width": 2.0' in summary_json(cat_census, 2.0)
    with pytest.raises(ValidationError):
        length_summary(cat_census, 0)


def test_closed_geodesic_validation():
    with pytest.raises(ValidationError):
        ClosedGeodesic(type="B", length=1.0, period=0)
    with pytest.raises(ValidationError):
        ClosedGeodesic(type="C", length=1.0)
