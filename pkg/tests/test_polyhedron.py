"""Representations, double description, projections and LP images."""

import random
from fractions import Fraction

import pytest

from polyset.exceptions import DimensionMismatchError, EmptySetError
from polyset.lp import LPBuilder, Sense
from polyset.polyhedron import (
    HRep,
    LinearImage,
    VRep,
    affine_hull,
    affine_hull_ineq,
    contains_direction,
    contains_point,
    dimension,
    fourier_motzkin,
    h_to_v,
    image_vrep,
    is_empty,
    is_subset,
    min_outer_normals,
    minkowski_sum,
    project_drop,
    recession_cone,
    recession_cone_v,
    remove_redundancy,
    sets_equal,
    v_to_h,
)

SQUARE = HRep(dim=2, A=((1, 0), (0, 1), (-1, 0), (0, -1)), b=(1, 1, 0, 0))
TRIANGLE = VRep(dim=2, points=((0, 0), (1, 0), (0, 1)))


def _rows(h):
    return set(zip(h.A, h.b))


def _random_polytope(rng, dim, cuts):
    """Box [-3, 3]^dim cut by random halfspaces that keep the origin."""
    A, b = [], []
    for i in range(dim):
        for s in (1, -1):
            A.append(tuple(s if j == i else 0 for j in range(dim)))
            b.append(3)
    for _ in range(cuts):
        A.append(tuple(rng.randint(-3, 3) for _ in range(dim)))
        b.append(rng.randint(0, 6))
    return HRep(dim=dim, A=tuple(A), b=tuple(b))


def _random_vrep(rng, dim):
    points = tuple(tuple(rng.randint(-3, 3) for _ in range(dim)) for _ in range(rng.randint(1, 6)))
    rays = tuple(tuple(rng.randint(-1, 2) for _ in range(dim)) for _ in range(rng.randint(0, 2)))
    return VRep(dim=dim, points=points, rays=rays)


def _random_hrep(rng, dim):
    """Halfspaces that keep the origin, often unbounded, sometimes with a hyperplane."""
    A = tuple(tuple(rng.randint(-2, 2) for _ in range(dim)) for _ in range(rng.randint(1, 5)))
    b = tuple(rng.randint(0, 3) for _ in A)
    if dim > 1 and rng.random() < 0.3:
        return HRep(dim=dim, A=A, b=b, E=(tuple(rng.randint(-1, 1) for _ in range(dim)),), f=(0,))
    return HRep(dim=dim, A=A, b=b)


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------


def test_hrep_contains_and_dimension_check():
    assert SQUARE.contains((Fraction(1, 2), 1))
    assert not SQUARE.contains((2, 0))
    with pytest.raises(DimensionMismatchError):
        SQUARE.contains((0, 0, 0))
    with pytest.raises(DimensionMismatchError):
        HRep(dim=2, A=((1, 0, 0),), b=(1,))


def test_vrep_normalizes_rays_and_drops_zero_generators():
    v = VRep(dim=2, points=((0, 0),), rays=((2, 4), (0, 0)), lines=((Fraction(1, 2), 0),))
    assert v.rays == ((1, 2),)
    assert v.lines == ((1, 0),)
    assert not v.is_bounded
    assert VRep.empty(3).is_empty


# ---------------------------------------------------------------------------
# Double description
# ---------------------------------------------------------------------------


def test_h_to_v_square():
    v = h_to_v(SQUARE)
    assert set(v.points) == {(0, 0), (1, 0), (0, 1), (1, 1)}
    assert v.rays == () and v.lines == ()


def test_h_to_v_halfplane_has_line_and_ray():
    v = h_to_v(HRep(dim=2, A=((0, -1),), b=(0,)))
    assert v.points == ((0, 0),)
    assert v.rays == ((0, 1),)
    assert v.lines == ((1, 0),)


def test_h_to_v_empty():
    h = HRep(dim=1, A=((1,), (-1,)), b=(0, -1))
    assert h_to_v(h).is_empty
    assert is_empty(h)


def test_v_to_h_triangle_facets():
    h = v_to_h(TRIANGLE)
    assert _rows(h) == {((-1, 0), 0), ((0, -1), 0), ((1, 1), 1)}
    assert h.E == ()


def test_v_to_h_segment_has_equation():
    seg = VRep(dim=2, points=((0, 0), (1, 1)))
    h = v_to_h(seg)
    assert len(h.E) == 1
    assert sets_equal(h_to_v(h), seg)


def test_v_to_h_empty_is_infeasible_row():
    h = v_to_h(VRep.empty(2))
    assert h.A == ((0, 0),) and h.b == (-1,)
    assert h_to_v(h).is_empty


@pytest.mark.parametrize("seed", range(12))
def test_double_description_round_trip(seed):
    rng = random.Random(seed)
    v = _random_vrep(rng, rng.randint(1, 4))
    h = v_to_h(v)
    for p in v.points:
        assert h.contains(p)
    assert sets_equal(h_to_v(h), v)


@pytest.mark.parametrize("seed", range(20))
def test_h_to_v_to_h_round_trip(seed):
    rng = random.Random(100 + seed)
    h = _random_hrep(rng, rng.randint(1, 4))
    v = h_to_v(h)
    back = v_to_h(v)
    assert is_subset(v, back)
    assert is_subset(h_to_v(back), h)


@pytest.mark.parametrize("seed", range(12))
def test_projection_matches_fourier_motzkin(seed):
    rng = random.Random(100 + seed)
    dim = rng.randint(3, 5)
    h = _random_polytope(rng, dim, rng.randint(1, 4))
    keep = sorted(rng.sample(range(dim), 2))
    by_vertices = project_drop(h_to_v(h), keep)
    by_elimination = h_to_v(fourier_motzkin(h, keep))
    assert sets_equal(by_vertices, by_elimination)


def test_fourier_motzkin_keeps_infeasibility():
    h = HRep(dim=2, A=((1, 1), (-1, -1)), b=(0, -1))
    assert is_empty(fourier_motzkin(h, [0]))


# ---------------------------------------------------------------------------
# Affine hulls and normals
# ---------------------------------------------------------------------------


def test_affine_hull_of_segment():
    aff = affine_hull(VRep(dim=2, points=((0, 0), (1, 1))))
    assert aff.E == ((1, -1),)
    assert aff.f == (0,)
    assert aff.dim == 1
    assert dimension(VRep.empty(2)) == -1
    with pytest.raises(EmptySetError):
        affine_hull(VRep.empty(2))


def test_affine_hull_ineq_adds_negated_sum():
    ns = affine_hull_ineq(((1, -1),), (0,))
    assert ns.normals == ((1, -1), (-1, 1))
    assert ns.rhs == (0, 0)
    assert ns.kinds == ("affine", "affine")


def test_min_outer_normals_full_dimensional():
    ns = min_outer_normals(h_to_v(SQUARE))
    assert set(zip(ns.normals, ns.rhs)) == {((1, 0), 1), ((0, 1), 1), ((-1, 0), 0), ((0, -1), 0)}


def test_min_outer_normals_lower_dimensional():
    seg = VRep(dim=2, points=((0, 0), (1, 1)))
    ns = min_outer_normals(seg)
    assert ns.kinds.count("facet") == 2
    assert ns.kinds.count("affine") == 2
    assert set(zip(ns.normals, ns.rhs)) >= {((1, 1), 2), ((-1, -1), 0)}
    assert ns.contains((Fraction(1, 2), Fraction(1, 2)))
    assert not ns.contains((1, 0))


@pytest.mark.parametrize("seed", range(16))
def test_min_outer_normals_describe_the_set(seed):
    rng = random.Random(200 + seed)
    dim = rng.randint(1, 4)
    v = _random_vrep(rng, dim) if seed % 2 else h_to_v(_random_hrep(rng, dim))
    ns = min_outer_normals(v)
    assert sets_equal(h_to_v(HRep(dim=dim, A=ns.normals, b=ns.rhs)), v)


# ---------------------------------------------------------------------------
# LP queries
# ---------------------------------------------------------------------------


def test_contains_point_and_direction():
    quadrant = VRep.cone(2, [(1, 0), (0, 1)])
    assert contains_point(quadrant, (3, 5))
    assert not contains_point(quadrant, (-1, 0))
    assert contains_direction(quadrant, (1, 1))
    assert not contains_direction(TRIANGLE, (1, 0))
    assert contains_direction(TRIANGLE, (0, 0))
    assert not contains_point(VRep.empty(2), (0, 0))


def test_is_subset_respects_recession():
    quadrant = VRep.cone(2, [(1, 0), (0, 1)])
    assert is_subset(TRIANGLE, quadrant)
    assert not is_subset(quadrant, TRIANGLE)
    assert is_subset(VRep.empty(2), TRIANGLE)
    assert is_subset(TRIANGLE, SQUARE)


def test_recession_cone_of_hrep():
    h = HRep(dim=2, A=((0, -1),), b=(-1,))
    rc = recession_cone(h)
    assert rc.b == (0,)
    with pytest.raises(EmptySetError):
        recession_cone(HRep(dim=1, A=((0,),), b=(-1,)))


@pytest.mark.parametrize("seed", range(16))
def test_recession_cone_matches_generators(seed):
    rng = random.Random(300 + seed)
    h = _random_hrep(rng, rng.randint(1, 4))
    v = h_to_v(h)
    assert sets_equal(h_to_v(recession_cone(h)), VRep.cone(h.dim, v.rays, v.lines))
    assert sets_equal(recession_cone_v(v), VRep.cone(h.dim, v.rays, v.lines))


def test_remove_redundancy():
    v = VRep(
        dim=2,
        points=((0, 0), (1, 0), (0, 1), (1, 1), (Fraction(1, 2), Fraction(1, 2)), (1, 1)),
        rays=((1, 0), (0, 1), (1, 1)),
        lines=(),
    )
    r = remove_redundancy(v)
    assert set(r.rays) == {(1, 0), (0, 1)}
    assert r.points == ((0, 0),)
    lines = remove_redundancy(VRep(dim=2, points=((0, 0),), lines=((1, 0), (2, 0), (0, 3))))
    assert len(lines.lines) == 2


def test_minkowski_sum():
    s = minkowski_sum(TRIANGLE, VRep(dim=2, points=((1, 1),), rays=((0, 1),)))
    assert set(s.points) == {(1, 1), (2, 1), (1, 2)}
    assert s.rays == ((0, 1),)
    assert minkowski_sum(TRIANGLE, VRep.empty(2)).is_empty


# ---------------------------------------------------------------------------
# LP images
# ---------------------------------------------------------------------------


def _box_image(image, upper=1):
    lp = LPBuilder()
    z = lp.add_vars(2)
    for c in z:
        lp.add_row({c: 1}, Sense.LE, upper)
    return LinearImage.from_builder(lp, [[(z[i], a) for i, a in enumerate(row)] for row in image])


def test_image_of_square_under_sum_is_segment():
    v = image_vrep(_box_image([[1, 1]]))
    assert set(v.points) == {(0,), (2,)}


def test_image_of_square_in_plane_is_lower_dimensional():
    v = image_vrep(_box_image([[1, 1], [1, 1]]))
    assert sets_equal(v, VRep(dim=2, points=((0, 0), (2, 2))))


def test_image_of_unbounded_set_has_ray():
    lp = LPBuilder()
    z = lp.add_vars(2)
    lp.add_row({z[0]: 1}, Sense.LE, 1)
    v = image_vrep(LinearImage.from_builder(lp, [[(z[0], 1)], [(z[1], 1)]]))
    assert sets_equal(v, VRep(dim=2, points=((0, 0), (1, 0)), rays=((0, 1),)))


def test_image_of_infeasible_set_is_empty():
    lp = LPBuilder()
    z = lp.add_var()
    lp.add_row({z: 1}, Sense.LE, -1)
    assert image_vrep(LinearImage.from_builder(lp, [[(z, 1)]])).is_empty
