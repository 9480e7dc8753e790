import pytest
from hypothesis import given, settings

from conftest import complexes
from stackwalk.catalog import cross_polytope_boundary, glued_tetrahedra, octahedron, rp2_6, torus7
from stackwalk.complex import PreconditionError, boundary_simplex, cone, from_facets, simplex
from stackwalk.generators import gen_hbar_member
from stackwalk.homology import betti, is_orientable
from stackwalk.linalg import F2, QQ
from stackwalk.recognition import (
    NotClosedUnderSubsets,
    Verdict,
    _Memo,
    _boundary_masks,
    boundary_complex,
    boundary_ridges,
    classify,
    interior_faces,
    is_homology_sphere,
    is_pseudomanifold,
)


@pytest.mark.parametrize("d", range(1, 5))
def test_simplex_boundary(d):
    assert boundary_complex(simplex(d), F2) == boundary_simplex(d)
    assert boundary_complex(boundary_simplex(d), F2).facet_masks == frozenset({0})


def test_glued_tetrahedra_boundary():
    bd = boundary_complex(glued_tetrahedra(), F2)
    assert len(bd.facets) == 6 and (0, 1, 2) not in bd.facets
    assert is_homology_sphere(bd, F2)


def test_boundary_requires_pure():
    with pytest.raises(PreconditionError):
        boundary_complex(from_facets([[0, 1, 2], [2, 3]]), F2)


def test_boundary_closure_failure_is_reported():
    # a disk closed up around vertex 0 plus a dangling triangle at 0
    c = from_facets([[0, 1, 2], [0, 2, 3], [0, 1, 3], [0, 4, 5]])
    with pytest.raises(NotClosedUnderSubsets):
        boundary_complex(c, F2)
    assert classify(c, F2).verdict is Verdict.NOT_MANIFOLD


@pytest.mark.parametrize("d", range(1, 6))
def test_classify_basic(d):
    assert classify(boundary_simplex(d + 1), F2).verdict is Verdict.SPHERE
    assert classify(simplex(d), F2).verdict is Verdict.BALL


@pytest.mark.parametrize("field", [F2, QQ])
def test_rp2_is_closed_manifold(field):
    cls = classify(rp2_6(), field)
    assert cls.verdict is Verdict.CLOSED_MANIFOLD and cls.is_closed


def test_torus_and_cone():
    assert classify(torus7(), QQ).verdict is Verdict.CLOSED_MANIFOLD
    assert classify(cone(octahedron(), 7), F2).verdict is Verdict.BALL
    assert classify(cone(torus7(), 9), F2).verdict is Verdict.NOT_MANIFOLD


def test_non_manifold_witness():
    three = from_facets([[0, 1, 2], [0, 1, 3], [0, 1, 4]])
    cls = classify(three, F2)
    assert not cls.is_manifold and cls.witness is not None


def test_interior_faces():
    assert interior_faces(simplex(3), F2) == [(0, 1, 2, 3)]
    assert interior_faces(glued_tetrahedra(), F2) == [(0, 1, 2), (0, 1, 2, 3), (0, 1, 2, 4)]


def test_interior_faces_of_generated_balls():
    for seed in range(5):
        ball, _ = gen_hbar_member(3, 0, 6, seed)
        inner = interior_faces(ball, F2)
        assert sum(len(f) == 4 for f in inner) == 6
        assert sum(len(f) == 3 for f in inner) == 5
        assert len(inner) == 11


def test_pseudomanifold():
    assert all(is_pseudomanifold(boundary_simplex(d)) for d in range(1, 5))
    assert not is_pseudomanifold(from_facets([[0, 1, 2], [0, 3, 4]]))
    assert not is_pseudomanifold(from_facets([[0, 1, 2], [0, 1, 3], [0, 1, 4]]))
    with pytest.raises(PreconditionError):
        is_pseudomanifold(from_facets([[0, 1, 2], [3, 4]]))


CATALOG = [octahedron(), torus7(), rp2_6(), glued_tetrahedra(), cone(octahedron(), 7),
           cross_polytope_boundary(4), simplex(3), boundary_simplex(5)]


@pytest.mark.parametrize("c", CATALOG, ids=lambda c: str(c.facets[:2]))
def test_fast_path_matches_homology_rule(c):
    memo = _Memo(F2)
    d = c.dim
    fast = _boundary_masks(c, memo)
    for r in c.face_masks(d - 1):
        slow = memo.link_homology(c, r)[0] == 0
        assert (r in fast) == slow


@given(complexes)
@settings(max_examples=150, deadline=None)
def test_classify_is_total_and_consistent(c):
    cls = classify(c, F2)
    if cls.verdict is Verdict.BALL:
        assert is_homology_sphere(boundary_complex(c, F2), F2) or c.dim == 0
    if cls.has_boundary:
        bd = boundary_complex(c, F2)
        for comp_cls in [classify(bd, F2)]:
            assert comp_cls.is_closed or bd.dim <= 0
    if cls.is_manifold and c.dim >= 1:
        v = set(boundary_ridges(c))
        assert v == set(boundary_complex(c, F2).face_masks(c.dim - 1))


@given(complexes)
@settings(max_examples=150, deadline=None)
def test_acyclic_orientable_bounded_manifold_is_ball(c):
    from stackwalk.complex import num_components
    cls = classify(c, QQ)
    if cls.has_boundary and num_components(c) == 1 and is_orientable(c, QQ):
        if betti(c, QQ).is_acyclic():
            assert cls.verdict is Verdict.BALL


def test_generated_members_have_closed_boundary():
    for seed, (d, k) in enumerate([(2, 1), (3, 1), (3, 2), (4, 1)]):
        c, _ = gen_hbar_member(d, k, 4, seed)
        assert classify(c, F2).verdict is Verdict.BOUNDED_MANIFOLD
        assert classify(boundary_complex(c, F2), F2).is_closed
