from hypothesis import given
from hypothesis import strategies as st

from amoebakit.newton import (
    faces,
    is_nondegenerate,
    lattice_points,
    newton_polytope,
    normal_cone,
    normalized_volume,
    simplex_volume,
    triangulate,
    truncation,
)
from amoebakit.poly import parse

from conftest import example1


def test_example1_triangle():
    P = newton_polytope(example1("3/100"))
    assert set(P.vertices) == {(0, 0), (1, 2), (2, 1)}
    assert normalized_volume(P) == 3
    assert set(lattice_points(P)) == {(0, 0), (1, 1), (1, 2), (2, 1)}
    # 3 vertices, 3 edges, the polygon itself
    assert sorted(F.dimension for F in faces(P)) == [0, 0, 0, 1, 1, 1, 2]


def test_example2_cube_simplex(ex2):
    P = newton_polytope(ex2)
    assert len(P.vertices) == 8
    assert normalized_volume(P) == 6
    assert len(lattice_points(P)) == 8
    assert sum(simplex_volume(s) for s in triangulate(P)) == 6


def test_lower_dimensional_support():
    P = newton_polytope([(0, 0), (2, 2), (1, 1)])
    assert P.dim == 1
    assert normalized_volume(P) == 0
    assert len(P.equations) == 1


def test_normal_cone_of_vertex():
    P = newton_polytope(example1("3/100"))
    cone = normal_cone(P, (0, 0))
    assert len(cone) == 2
    # outward normals: the vertex maximizes each of them over the polytope
    for w in cone:
        assert all(sum(a * b for a, b in zip(w, v)) <= 0 for v in P.vertices)
    assert normal_cone(P, (1, 1)) == []


def test_edge_truncation():
    f = example1("3/100")
    P = newton_polytope(f)
    edge = next(F for F in faces(P) if F.dimension == 1 and set(F.support) == {(1, 2), (2, 1)})
    assert truncation(f, edge) == parse("z1^2*z2 + z1*z2^2", ["z1", "z2"])


def test_nondegeneracy_verdicts():
    assert is_nondegenerate(example1("3/100")).verdict == "nondegenerate"
    # the edge truncation (z1 - z2)^2 vanishes doubly
    bad = parse("z1^2 - 2*z1*z2 + z2^2 + 1", ["z1", "z2"])
    rep = is_nondegenerate(bad)
    assert not rep and rep.face is not None


pts = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=3, max_size=8, unique=True)


@given(pts)
def test_volume_matches_triangulation(points):
    P = newton_polytope(points)
    vol = normalized_volume(P)
    if P.dim == 2:
        assert sum(simplex_volume(s) for s in triangulate(P)) == vol
    else:
        assert vol == 0


@given(pts)
def test_pick_formula(points):
    P = newton_polytope(points)
    if P.dim < 2:
        return
    lat = lattice_points(P)
    boundary = [p for p in lat if P.tight_facets(p)]
    interior = len(lat) - len(boundary)
    # Pick: 2A = 2I + B - 2, and the normalized volume is 2A
    assert normalized_volume(P) == 2 * interior + len(boundary) - 2


@given(pts)
def test_vertices_are_contained(points):
    P = newton_polytope(points)
    assert all(P.contains(p) for p in points)
    assert set(P.vertices) <= set(points)
