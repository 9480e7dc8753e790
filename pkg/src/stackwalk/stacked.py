"""Stackedness tests for balls, spheres, closed manifolds and vertex links."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import comb
from typing import Optional

from .complex import (
    Complex,
    Face,
    PreconditionError,
    bits,
    f_vector,
    is_chordal_skeleton,
    link,
    missing_faces,
    num_components,
    to_face,
    to_mask,
)
from .homology import betti
from .linalg import F2, FieldSpec
from .recognition import (
    Verdict,
    boundary_complex,
    classify,
    is_homology_ball,
    is_homology_sphere,
)


@dataclass(frozen=True)
class TreeCertificate:
    """A stacked ball as a sequence of d-simplices glued along (d-1)-faces.

    ``gluings[0]`` is None; for j > 0, ``facets[j]`` is attached along
    ``gluings[j]`` to exactly one earlier facet and brings one new vertex.
    """

    dim: int
    facets: tuple[Face, ...]
    gluings: tuple[Optional[Face], ...]

    def __len__(self) -> int:
        return len(self.facets)

    def build(self) -> Complex:
        """Replay the gluings, validating each, and return the ball."""
        if not self.facets or len(self.facets) != len(self.gluings):
            raise ValueError("tree certificate needs one gluing entry per facet")
        d = self.dim
        first = to_mask(self.facets[0])
        if first.bit_count() != d + 1 or self.gluings[0] is not None:
            raise ValueError("tree certificate must start from a single d-simplex")
        masks = [first]
        seen = first
        free: dict[int, int] = {first ^ (1 << v): first for v in bits(first)}
        for face, glue in zip(self.facets[1:], self.gluings[1:]):
            f, g = to_mask(face), to_mask(glue or ())
            if f.bit_count() != d + 1 or g.bit_count() != d or g & f != g:
                raise ValueError(f"bad gluing {glue} for facet {face}")
            if g not in free:
                raise ValueError(f"gluing face {glue} is not a free face of the partial ball")
            apex = f & ~g
            if apex & seen:
                raise ValueError(f"facet {face} does not bring a new vertex")
            del free[g]
            for v in bits(g):
                free[f ^ (1 << v)] = f
            masks.append(f)
            seen |= f
        return Complex(masks, _trusted=True)

    def to_json(self) -> dict:
        return {"dim": self.dim,
                "facets": [list(f) for f in self.facets],
                "gluings": [None if g is None else list(g) for g in self.gluings]}

    @classmethod
    def from_json(cls, doc: dict) -> "TreeCertificate":
        return cls(int(doc["dim"]),
                   tuple(tuple(int(v) for v in f) for f in doc["facets"]),
                   tuple(None if g is None else tuple(int(v) for v in g)
                         for g in doc["gluings"]))


def _require(c: Complex, field: FieldSpec, *allowed: Verdict) -> None:
    cls = classify(c, field)
    if cls.verdict not in allowed:
        names = ", ".join(v.value for v in allowed)
        raise PreconditionError(
            f"expected {names}; got {cls.verdict.value}"
            + (f" ({cls.reason} at {cls.witness})" if cls.reason else ""))


def _stacked_boundary_faces(c: Complex, field: FieldSpec) -> bool:
    d = c.dim
    bd = boundary_complex(c, field).face_masks()
    # interior faces of dimension <= d-2 are exactly faces of size <= d-1 off the boundary
    return all(m in bd for k in range(0, d - 1) for m in c.face_masks(k))


def is_stacked_with_boundary(c: Complex, field: FieldSpec = F2, check: bool = True) -> bool:
    """All interior faces have dimension >= d-1."""
    if check:
        _require(c, field, Verdict.BALL, Verdict.BOUNDED_MANIFOLD)
    return _stacked_boundary_faces(c, field)


def _sphere_reduces(c: Complex) -> bool:
    e = c.dim
    facets = set(c.facet_masks)
    verts = c.vertex_mask
    star: dict[int, set[int]] = {}
    for f in facets:
        for v in bits(f):
            star.setdefault(v, set()).add(f)
    while verts.bit_count() > e + 2:
        chosen = None
        for v in bits(verts):
            s = star[v]
            if len(s) != e + 1:
                continue
            span = 0
            for f in s:
                span |= f
            base = span & ~(1 << v)
            if base.bit_count() == e + 1 and base not in facets:
                chosen = (v, s, base)
                break
        if chosen is None:
            return False
        v, s, base = chosen
        for f in list(s):
            facets.discard(f)
            for u in bits(f):
                star[u].discard(f)
        del star[v]
        facets.add(base)
        for u in bits(base):
            star[u].add(base)
        verts &= ~(1 << v)
    full = verts
    return (verts.bit_count() == e + 2
            and facets == {full ^ (1 << v) for v in bits(full)})


def is_stacked_sphere(c: Complex, field: FieldSpec = F2, check: bool = True) -> bool:
    """Decide stackedness of a homology sphere by undoing stellar subdivisions.

    A vertex whose link is the boundary of a simplex, on vertices that do
    not yet span a facet, is removed and its star replaced by that simplex
    (smallest label first).  Stacked exactly when this ends at the boundary
    of a simplex.
    """
    if check and not is_homology_sphere(c, field):
        raise PreconditionError("is_stacked_sphere needs a homology sphere")
    e = c.dim
    if e <= 1:
        return e == 1 or (e == 0 and c.num_vertices == 2)
    return _sphere_reduces(c)


def kalai_criterion(c: Complex, field: FieldSpec = F2, check: bool = True) -> bool:
    """Chordal 1-skeleton and no missing k-faces for 1 < k < d-1 (c a (d-1)-sphere)."""
    if check and not is_homology_sphere(c, field):
        raise PreconditionError("kalai_criterion needs a homology sphere")
    d = c.dim + 1
    if d < 3:
        raise PreconditionError("kalai_criterion needs spheres of dimension >= 2")
    if not is_chordal_skeleton(c):
        return False
    return all(not missing_faces(c, k) for k in range(2, d - 1))


def sphere_edge_count(e: int, n: int) -> int:
    """Edge count forced on a stacked e-sphere with n vertices."""
    return (e + 1) * n - comb(e + 2, 2)


def _link_is_stacked(lk: Complex, field: FieldSpec) -> bool:
    if is_homology_sphere(lk, field):
        return is_stacked_sphere(lk, field, check=False)
    if is_homology_ball(lk, field):
        return _stacked_boundary_faces(lk, field) if lk.dim >= 1 else True
    raise PreconditionError("vertex link is neither a homology sphere nor a ball")


def is_locally_stacked(c: Complex, field: FieldSpec = F2, check: bool = True) -> bool:
    """Every vertex link is a stacked sphere or a stacked ball."""
    if check:
        _require(c, field, Verdict.SPHERE, Verdict.BALL, Verdict.CLOSED_MANIFOLD,
                 Verdict.BOUNDED_MANIFOLD)
    return all(_link_is_stacked(link(c, 1 << v), field) for v in bits(c.vertex_mask))


def bagchi_quantity(c: Complex) -> int:
    """``f_1 - 4 f_0 + 10`` for a 3-manifold."""
    fv = f_vector(c)
    return fv[2] - 4 * fv[1] + 10


def is_stacked_closed(c: Complex, field: FieldSpec = F2, check: bool = True) -> bool:
    """Stackedness of a connected closed homology d-manifold, d >= 3.

    d >= 4 reduces to local stackedness; d = 3 uses the edge-count equality
    ``f_1 - 4 f_0 + 10 = 10 β_1``.
    """
    d = c.dim
    if d <= 2:
        raise PreconditionError("closed stackedness is only decided for d >= 3")
    if num_components(c) != 1:
        raise PreconditionError("is_stacked_closed needs a connected complex")
    if check:
        _require(c, field, Verdict.SPHERE, Verdict.CLOSED_MANIFOLD)
    if d == 3:
        return bagchi_quantity(c) == 10 * betti(c, field)[1]
    return is_locally_stacked(c, field, check=False)


def tree_certificate(c: Complex, field: FieldSpec = F2, check: bool = True) -> TreeCertificate:
    """Gluing tree of a stacked ball, read off its interior (d-1)-faces."""
    if check and not is_stacked_with_boundary(c, field):
        raise PreconditionError("tree_certificate needs a stacked manifold with boundary")
    d = c.dim
    facets = sorted(c.facet_masks)
    adj: dict[int, list[tuple[int, int]]] = {f: [] for f in facets}
    edges = 0
    for r in sorted(c.face_masks(d - 1)):
        star = c.star_facets(r)
        if len(star) == 2:
            a, b = star
            adj[a].append((b, r))
            adj[b].append((a, r))
            edges += 1
    order = [facets[0]]
    glue: list[Optional[int]] = [None]
    seen = {facets[0]}
    queue = deque([facets[0]])
    while queue:
        f = queue.popleft()
        for g, r in sorted(adj[f]):
            if g not in seen:
                seen.add(g)
                order.append(g)
                glue.append(r)
                queue.append(g)
    if len(seen) != len(facets) or edges != len(facets) - 1:
        raise PreconditionError(
            "facet adjacency across interior faces is not a tree; "
            "the complex is stacked but not a ball (it carries handles)")
    return TreeCertificate(d, tuple(to_face(f) for f in order),
                           tuple(None if g is None else to_face(g) for g in glue))
