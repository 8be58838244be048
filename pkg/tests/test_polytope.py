from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from nzpolytope.polytope import (
    EmptyPolytopeError,
    RationalPolytope,
    UnboundedError,
    affine_map,
    box_corner_candidates,
    check_parapolytope,
    convex_hull,
    dilate,
    extract_fibers,
    hull_equals,
    is_lattice_polytope,
    is_reflexive,
    lattice_points,
    minkowski_sum,
    normal_fan_equal,
    nz_polytope,
    project_to_affine_hull,
    reflexive_report,
)
from nzpolytope.rootdata import root_datum, word_indexing

F = Fraction


def pts_strategy(dim, lo=-3, hi=3, min_size=1, max_size=12):
    return st.lists(
        st.lists(st.integers(lo, hi), min_size=dim, max_size=dim).map(tuple), min_size=min_size, max_size=max_size
    )


# ---------------------------------------------------------------- hulls


def test_segment():
    P = convex_hull([(0,), (3,), (1,)])
    assert P.vertices == ((F(0),), (F(3),))
    assert sorted(P.facets) == [((-1,), F(3)), ((1,), F(0))]
    assert P.dim == 1


def test_a2_triangle_has_one_equation():
    P = convex_hull([(0, 0, 0), (0, 0, 1), (0, 1, 1)])
    assert len(P.vertices) == 3 and P.dim == 2
    assert len(P.equations) == 1 and len(P.facets) == 3
    assert all(P.contains(v) for v in P.vertices)
    assert not P.contains((1, 0, 0))


def test_cube():
    P = convex_hull(product((0, 1), repeat=3))
    assert len(P.vertices) == 8 and len(P.facets) == 6
    assert len(lattice_points(P)) == 8
    assert is_lattice_polytope(P)


def test_single_point_and_empty():
    P = convex_hull([(2, 5)])
    assert P.vertices == ((F(2), F(5)),) and P.dim == 0
    assert lattice_points(P) == {(2, 5)}
    with pytest.raises(EmptyPolytopeError):
        convex_hull([])


def test_from_inequalities_round_trip():
    tri = RationalPolytope.from_inequalities([((1, 0), 0), ((0, 1), 0), ((-1, -1), 2)])
    assert sorted(tri.vertices) == [(0, 0), (0, 2), (2, 0)]
    assert tri == convex_hull(tri.vertices)
    assert len(lattice_points(tri)) == 6
    with pytest.raises(UnboundedError):
        RationalPolytope.from_inequalities([((1, 0), 0), ((0, 1), 0)])


def test_rational_vertices_and_lattice_check():
    P = convex_hull([(F(1, 2), 0), (0, 1), (1, 1)])
    assert not is_lattice_polytope(P)
    assert is_lattice_polytope(dilate(P, 2))
    assert lattice_points(P) == {(0, 1), (1, 1)}


def test_dict_round_trip():
    P = convex_hull([(F(1, 3), 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
    assert RationalPolytope.from_dict(P.to_dict()) == P
    assert P.to_json() == RationalPolytope.from_dict(P.to_dict()).to_json()


def test_hull_equals_uses_vertices_and_containment():
    square = convex_hull(product((0, 2), repeat=2))
    assert hull_equals(product(range(3), repeat=2), square)
    assert not hull_equals([(0, 0), (2, 0), (0, 2)], square)
    assert not hull_equals(list(product(range(3), repeat=2)) + [(3, 0)], square)


def test_hull_equals_bulk_path_agrees():
    box = convex_hull(product((0, 12), repeat=3))
    pts = list(product(range(13), repeat=3))
    assert len(pts) > 2000
    assert hull_equals(pts, box)
    assert not hull_equals(pts + [(13, 0, 0)], box)


# ---------------------------------------------------------------- reflexivity and fans


def test_reflexive_examples():
    assert is_reflexive(convex_hull([(-1,), (1,)]))
    assert not is_reflexive(convex_hull([(-2,), (2,)]))
    assert is_reflexive(convex_hull(product((-1, 1), repeat=2)))
    assert reflexive_report(convex_hull(product((-1, 2), repeat=2))).reason.endswith("interior lattice points")
    with pytest.raises(ValueError):
        reflexive_report(convex_hull([(0, 0, 0), (0, 0, 1), (0, 1, 1)]))


def test_projection_makes_a_triangle_full_dimensional():
    tri = convex_hull([(0, 0, 0), (0, 0, 1), (0, 1, 1)])
    proj = project_to_affine_hull(tri)
    assert proj.polytope.is_full_dimensional and proj.polytope.dim_ambient == 2
    assert len(proj.polytope.vertices) == 3 and is_lattice_polytope(proj.polytope)
    for v in tri.vertices:
        assert proj.lift(proj.coords(v)) == v


def test_normal_fans():
    sq = convex_hull(product((0, 1), repeat=2))
    rect = convex_hull(product((0, 3), (0, 1)))
    tri = convex_hull([(0, 0), (1, 0), (0, 1)])
    assert normal_fan_equal(sq, rect)
    assert not normal_fan_equal(sq, tri)


# ---------------------------------------------------------------- fibers


def test_extract_fibers_and_parapolytope():
    idx = word_indexing((1, 2, 1))
    tri = convex_hull([(0, 0, 0), (0, 0, 1), (0, 1, 1)])
    assert check_parapolytope(tri, idx, 3).passed
    fam = extract_fibers({(0, 0, 0), (0, 0, 1), (0, 1, 1)}, idx, 1)
    assert fam and fam.points(idx) == {(0, 0, 0), (0, 0, 1), (0, 1, 1)}
    bad = extract_fibers({(0, 0, 0), (1, 0, 1)}, idx, 1)
    assert not bad and bad.first == (0,)


def test_simplex_is_not_a_parapolytope_for_a_single_color():
    idx = word_indexing((1, 1))  # both coordinates in one color block
    tri = convex_hull([(0, 0), (1, 0), (0, 1)])
    v = check_parapolytope(tri, idx, 2)
    assert not v.passed and v.failure_scale == 1
    assert v.witness_fibers() == [()]


def test_box_corner_candidates_keep_hull():
    idx = word_indexing((1, 2, 1))
    g = [(0, 0, 0), (0, 0, 1), (0, 1, 1), (0, 0, 2), (0, 1, 2), (0, 2, 2)]
    cand = box_corner_candidates(g, idx)
    assert convex_hull(cand) == convex_hull(g)
    assert len(cand) < len(g)


# ---------------------------------------------------------------- NZ polytopes


def test_nz_polytope_a1():
    res = nz_polytope(root_datum("A", 1), (1,), (3,))
    assert res.polytope == convex_hull([(0,), (3,)])
    assert res.stabilized and res.status == "stabilized"
    assert res.multiples_checked == (1, 2)


def test_nz_polytope_a2_rho():
    res = nz_polytope(root_datum("A", 2), (1, 2, 1), (1, 1))
    assert len(res.lattice_points) == 8 and res.stabilized
    assert lattice_points(res.polytope) == res.lattice_points


def test_nz_polytope_rejects_bad_multiple():
    with pytest.raises(ValueError):
        nz_polytope(root_datum("A", 1), (1,), (1,), stabilization_m=0)


# ---------------------------------------------------------------- oracle and properties


@settings(max_examples=60)
@given(st.integers(2, 3).flatmap(lambda d: pts_strategy(d, min_size=d + 2, max_size=14)))
def test_vertices_match_scipy(points):
    arr = np.array(points, dtype=float)
    assume(np.linalg.matrix_rank(arr - arr[0]) == arr.shape[1])
    ref = {tuple(int(x) for x in arr[k]) for k in ConvexHull(arr).vertices}
    P = convex_hull(points)
    assert {tuple(int(x) for x in v) for v in P.vertices} == ref
    assert P.is_full_dimensional


@given(pts_strategy(3))
def test_hull_contains_its_points_and_round_trips(points):
    P = convex_hull(points)
    assert all(P.contains(p) for p in points)
    assert set(P.vertices) <= {tuple(F(x) for x in p) for p in points}
    assert convex_hull(P.vertices) == P
    assert hull_equals(points, P)
    Q = RationalPolytope.from_inequalities(P.facets, P.equations, P.dim_ambient)
    assert Q == P


@given(pts_strategy(2, max_size=6), pts_strategy(2, max_size=6), pts_strategy(2, max_size=6))
def test_minkowski_commutative_and_associative(a, b, c):
    P, Q, R = convex_hull(a), convex_hull(b), convex_hull(c)
    assert minkowski_sum(P, Q) == minkowski_sum(Q, P)
    assert minkowski_sum(minkowski_sum(P, Q), R) == minkowski_sum(P, minkowski_sum(Q, R))
    S = minkowski_sum(P, Q)
    assert all(S.contains(tuple(x + y for x, y in zip(p, q))) for p in a for q in b)


@given(pts_strategy(2, max_size=6), st.integers(1, 3), st.integers(1, 3))
def test_dilation(points, s, t):
    P = convex_hull(points)
    assert dilate(dilate(P, s), t) == dilate(P, s * t)
    assert minkowski_sum(dilate(P, s), dilate(P, t)) == dilate(P, s + t)  # convex sets
    # Minkowski sums of lattice points land inside the dilate
    lp = lattice_points(P)
    assert {tuple(x + y for x, y in zip(p, q)) for p in lp for q in lp} <= lattice_points(dilate(P, 2))


@given(pts_strategy(3, max_size=8), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_affine_map_negation(points, shift):
    P = convex_hull(points)
    Q = affine_map(P, -1, shift)
    want = convex_hull([tuple(s - x for x, s in zip(p, shift)) for p in points])
    assert Q == want
    assert affine_map(Q, -1, shift) == P
