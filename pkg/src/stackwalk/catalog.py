"""Small named triangulations used in examples and tests."""
from __future__ import annotations

from itertools import combinations, product

from .complex import Complex, from_facets


def octahedron() -> Complex:
    """Boundary of the 3-dim cross-polytope on antipodal pairs 1-2, 3-4, 5-6."""
    return cross_polytope_boundary(3, start=1)


def cross_polytope_boundary(d: int, start: int = 0) -> Complex:
    """Boundary of the d-dim cross-polytope; vertex pairs (start+2i, start+2i+1) are antipodal."""
    if d < 1:
        raise ValueError("cross-polytope needs d >= 1")
    pairs = [(start + 2 * i, start + 2 * i + 1) for i in range(d)]
    return from_facets([list(p) for p in product(*pairs)])


def torus7() -> Complex:
    """Moebius' 7-vertex torus."""
    facets = []
    for i in range(7):
        facets.append([i, (i + 1) % 7, (i + 3) % 7])
        facets.append([i, (i + 2) % 7, (i + 3) % 7])
    return from_facets(facets)


def rp2_6() -> Complex:
    """6-vertex real projective plane (hemi-icosahedron)."""
    return from_facets([[1, 2, 3], [1, 2, 4], [1, 3, 5], [1, 4, 6], [1, 5, 6],
                        [2, 3, 6], [2, 4, 5], [2, 5, 6], [3, 4, 5], [3, 4, 6]])


def cyclic_polytope_boundary(n: int, d: int) -> Complex:
    """Boundary of the cyclic d-polytope on n vertices, by Gale's evenness condition."""
    if n < d + 1 or d < 2:
        raise ValueError("cyclic polytope needs d >= 2 and n >= d + 1")
    facets = []
    for s in combinations(range(n), d):
        members = set(s)
        ok = True
        outside = [i for i in range(n) if i not in members]
        for a, b in zip(outside, outside[1:]):
            if sum(1 for v in s if a < v < b) % 2:
                ok = False
                break
        if ok:
            facets.append(list(s))
    return from_facets(facets)


def glued_tetrahedra() -> Complex:
    return from_facets([[0, 1, 2, 3], [0, 1, 2, 4]])


NAMED = {
    "octahedron": octahedron,
    "torus7": torus7,
    "rp2": rp2_6,
    "glued-tetrahedra": glued_tetrahedra,
}
