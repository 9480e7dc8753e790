import pytest
from hypothesis import given, settings, strategies as st

from conftest import complexes
from oracles import reduced_betti
from stackwalk.catalog import glued_tetrahedra, octahedron, rp2_6, torus7
from stackwalk.complex import PreconditionError, boundary_simplex, from_facets, induced, simplex, void_link
from stackwalk.homology import (
    betti,
    euler_characteristic,
    inclusion_induced,
    is_orientable,
    relative_betti,
)
from stackwalk.linalg import F2, QQ, FieldSpec
from stackwalk.recognition import boundary_complex


@pytest.mark.parametrize("d", range(0, 6))
def test_sphere_betti(d):
    b = betti(boundary_simplex(d + 1), F2)
    assert b.as_list() == [0] * d + [1]


@pytest.mark.parametrize("field", [F2, QQ])
def test_torus(field):
    b = betti(torus7(), field)
    assert b.as_list() == [0, 2, 1]
    assert euler_characteristic(torus7()) == 0


def test_rp2_depends_on_field():
    assert betti(rp2_6(), F2).as_list() == [0, 1, 1]
    assert betti(rp2_6(), QQ).as_list() == [0, 0, 0]
    assert euler_characteristic(rp2_6()) == 1


def test_torus_against_oracle():
    for p in (0, 2):
        assert reduced_betti(torus7().facets, p) == [0, 0, 2, 1]


def test_void_complex_homology():
    b = betti(void_link(), F2)
    assert b[-1] == 1 and b.is_sphere(-1)


def test_relative_examples():
    for d in range(1, 5):
        s = simplex(d)
        assert relative_betti(s, boundary_complex(s), QQ).as_list() == [0] * d + [1]
    t = torus7()
    assert not any(relative_betti(t, t, F2).as_list())
    g = glued_tetrahedra()
    assert relative_betti(g, boundary_complex(g), QQ)[3] == 1


def test_relative_requires_subcomplex():
    with pytest.raises(PreconditionError):
        relative_betti(simplex(2), from_facets([[5, 6]]), F2)


def test_induced_map_examples():
    cyc = from_facets([[0, 1], [1, 2], [2, 3], [0, 3]])
    r = inclusion_induced(cyc, cyc, 1, F2)
    assert r.rank == 1 and r.injective
    o = octahedron()
    r = inclusion_induced(induced(o, {1, 3, 2, 4}), o, 1, F2)
    assert (r.source_dim, r.rank, r.injective) == (1, 0, False)
    e = void_link()
    for i in range(0, 3):
        assert inclusion_induced(e, o, i, F2).injective


def test_induced_map_requires_subcomplex():
    with pytest.raises(PreconditionError):
        inclusion_induced(simplex(3), octahedron(), 1, F2)


def test_orientability():
    for d in range(1, 5):
        assert is_orientable(boundary_simplex(d + 1), QQ)
    assert is_orientable(rp2_6(), F2)
    assert not is_orientable(rp2_6(), QQ)
    assert is_orientable(torus7(), QQ)
    assert is_orientable(glued_tetrahedra(), QQ)


def test_orientability_needs_connected():
    with pytest.raises(PreconditionError):
        is_orientable(from_facets([[0, 1, 2], [3, 4, 5]]), F2)


# properties -----------------------------------------------------------------

fields = st.sampled_from([F2, FieldSpec(3), QQ])


@given(complexes, fields)
@settings(max_examples=120)
def test_euler_consistency(c, field):
    b = betti(c, field)
    assert euler_characteristic(c) == 1 + sum((-1) ** i * x for i, x in enumerate(b.betti))


@given(complexes, fields)
@settings(max_examples=120)
def test_sparse_dense_agree(c, field):
    assert betti(c, field) == betti(c, field, method="dense")


@given(complexes, st.sampled_from([0, 2, 3]))
@settings(max_examples=60)
def test_betti_matches_sympy(c, p):
    b = betti(c, FieldSpec(p))
    ref = reduced_betti(c.facets, p)
    assert [b[-1]] + b.as_list() == ref[:1 + len(b.betti)]


@given(complexes)
def test_beta0_counts_components(c):
    from stackwalk.complex import num_components
    assert betti(c, F2)[0] == num_components(c) - 1


@given(complexes, st.frozensets(st.integers(0, 7)), st.frozensets(st.integers(0, 7)),
       st.integers(0, 2))
@settings(max_examples=80)
def test_composite_rank_bounded(c, w, u, i):
    u = u & w
    a, b = induced(c, u), induced(c, w)
    ab = inclusion_induced(a, b, i, F2).rank
    bc = inclusion_induced(b, c, i, F2).rank
    ac = inclusion_induced(a, c, i, F2).rank
    assert ac <= min(ab, bc)
    r = inclusion_induced(a, c, i, F2)
    assert r.rank <= min(r.source_dim, r.target_dim)
