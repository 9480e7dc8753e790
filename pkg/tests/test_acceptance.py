"""Exit criteria for the build, one test per criterion.

Each test records a ``criterion N: PASS/FAIL (seconds)`` line that the
terminal summary prints, and fails when its runtime budget is exceeded.
"""
import functools
import io
import json
import random
import time
from math import comb

import pytest

import conftest
from conftest import FIXTURES
from stackwalk.catalog import cross_polytope_boundary, cyclic_polytope_boundary, octahedron, rp2_6, torus7
from stackwalk.cli import run
from stackwalk.complex import (
    boundary_simplex,
    connected_components,
    f_vector,
    from_facets,
    induced,
    is_neighborly,
    num_components,
    to_face,
    to_mask,
)
from stackwalk.generators import (
    Certificate,
    gen_hbar_member,
    gen_stacked_sphere,
    gen_walkup_closed,
    search_neighborly_walkup,
    verify_certificate,
)
from stackwalk.homology import betti, euler_characteristic, is_orientable
from stackwalk.io import read_complex, read_json
from stackwalk.linalg import F2, QQ, FieldSpec
from stackwalk.recognition import Verdict, boundary_complex, boundary_ridges, classify
from stackwalk.stacked import (
    bagchi_quantity,
    is_locally_stacked,
    is_stacked_closed,
    is_stacked_sphere,
    is_stacked_with_boundary,
    kalai_criterion,
    sphere_edge_count,
)
from stackwalk.surgery import deletion_decomposition, handle_add_boundary, handle_add_closed, handle_delete
from stackwalk.tightness import criteria, is_tight, missing_face_vanishing_check

pytestmark = pytest.mark.acceptance


def criterion(n, budget):
    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            t0 = time.perf_counter()
            ok = False
            try:
                fn(*args, **kwargs)
                ok = True
            finally:
                dt = time.perf_counter() - t0
                within = dt < budget
                line = (f"criterion {n}: {'PASS' if ok and within else 'FAIL'} "
                        f"({dt:.1f}s, budget {budget}s)")
                conftest.ACCEPTANCE_LINES.append(line)
                print(line)
            assert within, f"criterion {n} took {dt:.1f}s, budget {budget}s"
        return inner
    return wrap


def random_complex(rng):
    n = rng.randint(1, 10)
    facets = []
    for _ in range(rng.randint(1, 8)):
        size = rng.randint(1, min(n, 5))
        facets.append(rng.sample(range(n), size))
    return from_facets(facets)


@criterion(1, 5)
def test_criterion_1_homology_exactness():
    for d in range(0, 6):
        for field in (F2, QQ):
            assert betti(boundary_simplex(d + 1), field).as_list() == [0] * d + [1]
    for field in (F2, QQ):
        assert betti(torus7(), field).as_list() == [0, 2, 1]
    assert betti(rp2_6(), F2).as_list() == [0, 1, 1]
    assert betti(rp2_6(), QQ).as_list() == [0, 0, 0]
    rng = random.Random(1)
    fields = [F2, FieldSpec(3), QQ]
    for i in range(1000):
        c = random_complex(rng)
        b = betti(c, fields[i % 3])
        assert euler_characteristic(c) == 1 + sum((-1) ** j * x for j, x in enumerate(b.betti))


@criterion(2, 30)
def test_criterion_2_stacked_sphere_concordance():
    rng = random.Random(2)
    for e in (2, 3, 4):
        for i in range(100):
            n = rng.randint(e + 2, 30)
            c, _ = gen_stacked_sphere(e, n, rng.getrandbits(64))
            assert c.num_vertices == n
            assert is_stacked_sphere(c, F2)
            assert kalai_criterion(c, F2)
            assert f_vector(c)[2] == sphere_edge_count(e, n) == (e + 1) * n - comb(e + 2, 2)
    for c in (octahedron(), cross_polytope_boundary(4)):
        assert not is_stacked_sphere(c, F2)
        assert not kalai_criterion(c, F2)
    # the edge count is decisive from dimension 3 on; every 2-sphere has 3n - 6 edges
    assert f_vector(cross_polytope_boundary(4))[2] == 24 != sphere_edge_count(3, 8)
    assert f_vector(octahedron())[2] == sphere_edge_count(2, 6)


def _b01(c):
    b = betti(c, F2)
    return b[0], b[1]


@criterion(3, 120)
def test_criterion_3_surgery_calculus():
    cases = 0
    seed = 0
    while cases < 200:
        rng = random.Random(seed)
        d = (2, 3, 4)[seed % 3]
        k = rng.randrange(4)
        c, _ = gen_hbar_member(d, k, rng.randrange(1, 6), seed)
        seed += 1
        bd = set(boundary_ridges(c))
        interior = sorted(m for m in c.face_masks(d - 1) if m not in bd)
        if not interior:
            continue
        cases += 1
        sigma = to_face(rng.choice(interior))
        s = to_mask(sigma)
        dec = deletion_decomposition(c, sigma, F2, check=False)
        # every link of a vertex of sigma splits into two balls, x and y apart
        for z in sigma:
            cx, cy = dec.link_components[z]
            assert dec.x in cx and dec.y in cy and not set(cx) & set(cy)
            assert classify(dec.x_piece(c, z), F2).verdict is Verdict.BALL
            assert classify(dec.y_piece(c, z), F2).verdict is Verdict.BALL
        assert not dec.X & dec.Y and dec.X | dec.Y == dec.R
        for z in sigma:
            assert frozenset(m for m in dec.X if m >> z & 1) == dec.R_x[z]
        if k == 0:
            rest = induced(c, c.vertex_mask & ~s)
            assert len(connected_components(rest)) == 2
        cut, psi = handle_delete(c, sigma, F2, check=False)
        assert classify(cut, F2).has_boundary
        before, after = _b01(c), _b01(cut)
        if num_components(cut) == 2:
            assert after == (before[0] + 1, before[1])
        else:
            assert after == (before[0], before[1] - 1)
        assert is_stacked_with_boundary(c, F2, check=False)
        assert is_stacked_with_boundary(cut, F2, check=False)
        assert handle_add_boundary(cut, psi, check=False) == c


@criterion(4, 60)
def test_criterion_4_walkup_identities():
    for k in range(4):
        for seed in range(20):
            ball, cert = gen_hbar_member(4, k, 3, 1000 * k + seed)
            closed = boundary_complex(ball, F2)
            assert betti(closed, F2)[1] == k
            fv = f_vector(closed)
            assert fv[2] - 4 * fv[1] + 10 == bagchi_quantity(closed) == 10 * k
            assert is_stacked_closed(closed, F2)
            # boundary commutes with each handle addition
            step = cert.base.build()
            for h in cert.handles:
                nxt = handle_add_boundary(step, h, check=False)
                assert boundary_complex(nxt, F2) == handle_add_closed(
                    boundary_complex(step, F2), h, check=False)
                step = nxt
            assert step == ball


@criterion(5, 30)
def test_criterion_5_novik_swartz():
    certified = []
    for d in (4, 5):
        for k in range(3):
            for seed in range(6):
                c, cert = gen_walkup_closed(d, k, 3, 50 * d + 10 * k + seed)
                certified.append((c, k))
    instances = [c for c, _ in certified]
    instances += [cross_polytope_boundary(4), cross_polytope_boundary(5),
                  cyclic_polytope_boundary(8, 4), cyclic_polytope_boundary(9, 5),
                  boundary_simplex(4), boundary_simplex(5)]
    checked = 0
    for c in instances:
        if not is_orientable(c, QQ):
            continue
        checked += 1
        cr = criteria(c, QQ)
        assert cr.ns_lhs >= cr.ns_rhs
    assert checked >= 10
    cp = criteria(cross_polytope_boundary(4), QQ)
    assert (cp.ns_lhs, cp.ns_rhs) == (2, 0)
    for c, k in certified:
        cr = criteria(c, QQ)
        assert cr.ns_lhs == cr.ns_rhs == comb(c.dim + 2, 2) * k


@criterion(6, 10)
def test_criterion_6_tightness():
    for d in range(0, 5):
        rep = is_tight(boundary_simplex(d + 1), F2)
        assert rep.tight == (d >= 1)  # S^0 is disconnected
    rep = is_tight(torus7(), F2)
    assert rep.tight and rep.subsets_checked == 128
    rep = is_tight(octahedron(), F2)
    assert not rep.tight and rep.witness == ((1, 2, 3, 4), 1)
    w = induced(octahedron(), rep.witness[0])
    assert len(w.facets) == 4 and all(len(f) == 2 for f in w.facets)


@criterion(7, 120)
def test_criterion_7_end_to_end():
    txt, cj = FIXTURES / "walkup9.txt", FIXTURES / "walkup9.cert.json"
    out = io.StringIO()
    assert run(["verify", str(txt), "--cert", str(cj)], stdout=out, stderr=io.StringIO()) == 0
    assert json.loads(out.getvalue())["ok"] is True
    c = read_complex(txt)
    cert = Certificate.from_json(read_json(cj))
    assert (cert.kind, cert.d, cert.k) == ("closed", 4, 1)
    # the committed fixture is exactly what the search command produces
    again = search_neighborly_walkup(4, 9, 1, 2026, 5000)
    assert again is not None and again[0] == c and again[1] == cert

    rep = is_tight(c, F2)
    assert rep.tight and rep.subsets_checked == 512
    assert is_neighborly(c) and is_stacked_closed(c, F2)
    assert verify_certificate(c, cert)
    b1 = betti(c, F2)[1]
    f0 = c.num_vertices
    assert (f0, b1) == (9, 1)
    assert (f0 - 4) * (f0 - 5) == 20 == 20 * b1


def _closed_instances():
    inst = [boundary_simplex(d + 1) for d in range(2, 6)]
    inst += [torus7(), rp2_6(), octahedron(),
             read_complex(FIXTURES / "walkup9.txt"), read_complex(FIXTURES / "walkup11.txt"),
             cross_polytope_boundary(4), cross_polytope_boundary(5),
             cyclic_polytope_boundary(7, 4), cyclic_polytope_boundary(8, 5)]
    for seed in range(6):
        inst.append(gen_walkup_closed(4, seed % 2, 2, seed)[0])
        inst.append(gen_stacked_sphere(3, 6 + seed, seed)[0])
    return [c for c in inst if c.num_vertices <= 16]


@criterion(8, 120)
def test_criterion_8_property_suite():
    tight_seen = locally_checked = 0
    for c in _closed_instances():
        d = c.dim
        for field in (F2, QQ):
            rep = is_tight(c, field)
            if rep.tight:
                tight_seen += 1
                assert num_components(c) == 1 and is_neighborly(c)
                assert missing_face_vanishing_check(c, field)
                b = betti(c, field)
                if d >= 4 and all(b[i] == 0 for i in range(2, d - 1)):
                    assert is_locally_stacked(c, field)
                    if c.num_vertices > d + 2:
                        locally_checked += 1
            if d == 3:
                stacked_ok = is_neighborly(c) and is_stacked_closed(c, field)
                assert rep.tight == (is_orientable(c, field) and stacked_ok)
    assert tight_seen >= 8
    assert locally_checked >= 1
    # orientable, acyclic homology manifolds with boundary are balls
    for seed in range(12):
        d, k = (2, 3, 4)[seed % 3], seed % 2
        c, _ = gen_hbar_member(d, k, 3, 7000 + seed)
        pieces = [c, boundary_complex(c, F2)]
        bd = set(boundary_ridges(c))
        interior = [m for m in c.face_masks(d - 1) if m not in bd]
        pieces.append(handle_delete(c, to_face(interior[0]), F2, check=False)[0])
        for piece in pieces:
            for comp in connected_components(piece):
                sub = induced(piece, to_mask(comp))
                cls = classify(sub, QQ)
                if cls.has_boundary and is_orientable(sub, QQ):
                    assert (cls.verdict is Verdict.BALL) == betti(sub, QQ).is_acyclic()
