"""Handle addition and deletion on homology manifolds.

``handle_add_closed`` removes the two paired facets and identifies each v
with psi(v); ``handle_add_boundary`` identifies without removing anything,
which across two components is a connected union.  ``handle_delete`` cuts
along an interior (d-1)-face and is the exact inverse of the latter.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Literal, Optional

from .complex import (
    Complex,
    Face,
    PreconditionError,
    bits,
    connected_components,
    disjoint_union,
    induced,
    link,
    shift_labels,
    to_face,
    to_mask,
)
from .linalg import F2, FieldSpec
from .recognition import Verdict, boundary_complex, classify

Mode = Literal["closed", "boundary"]


class AdmissibilityError(PreconditionError):
    """The facet pairing violates the disjoint-links condition."""


@dataclass(frozen=True)
class FacetBijection:
    """A bijection from facet ``source`` onto facet ``target``, as (v, psi(v)) pairs."""

    source: Face
    target: Face
    pairing: tuple[tuple[int, int], ...]

    def __post_init__(self):
        src = tuple(sorted(self.source))
        tgt = tuple(sorted(self.target))
        pairs = tuple(sorted((int(a), int(b)) for a, b in self.pairing))
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "target", tgt)
        object.__setattr__(self, "pairing", pairs)
        if sorted(a for a, _ in pairs) != list(src) or sorted(b for _, b in pairs) != list(tgt):
            raise ValueError("pairing must be a bijection from source onto target")
        if set(src) & set(tgt):
            raise ValueError("source and target facets must be disjoint")

    @classmethod
    def ordered(cls, source, target) -> "FacetBijection":
        """Pair the i-th smallest label of source with the i-th smallest of target."""
        s, t = sorted(source), sorted(target)
        return cls(tuple(s), tuple(t), tuple(zip(s, t)))

    def mapping(self) -> dict[int, int]:
        return dict(self.pairing)

    def inverse(self) -> "FacetBijection":
        return FacetBijection(self.target, self.source, tuple((b, a) for a, b in self.pairing))

    def to_json(self) -> dict:
        return {"sigma": list(self.source), "tau": list(self.target),
                "pairing": [list(p) for p in self.pairing]}

    @classmethod
    def from_json(cls, doc: dict) -> "FacetBijection":
        return cls(tuple(doc["sigma"]), tuple(doc["tau"]),
                   tuple((int(a), int(b)) for a, b in doc["pairing"]))


def _pairs_admissible(c: Complex, pairing) -> bool:
    # lk(v) ∩ lk(w) = {∅} exactly when the links share no vertex
    for v, w in pairing:
        if c.neighbors(v) & c.neighbors(w):
            return False
    return True


def is_admissible(c: Complex, psi: FacetBijection, mode: Mode = "closed",
                  field: FieldSpec = F2) -> bool:
    """Links of every paired v and psi(v) meet only in the empty face.

    In closed mode the paired faces must be facets of ``c``; in boundary
    mode facets of its boundary (links are still taken in ``c``).
    """
    src, tgt = to_mask(psi.source), to_mask(psi.target)
    host = c if mode == "closed" else boundary_complex(c, field)
    if mode not in ("closed", "boundary"):
        raise ValueError(f"unknown mode {mode!r}")
    for f in (src, tgt):
        if f not in host.facet_masks:
            where = "the complex" if mode == "closed" else "the boundary"
            raise PreconditionError(f"{to_face(f)} is not a facet of {where}")
    return _pairs_admissible(c, psi.pairing)


def _identify(facets, mapping: dict[int, int]) -> list[int]:
    out = []
    for f in facets:
        g = 0
        for v in bits(f):
            g |= 1 << mapping.get(v, v)
        if g.bit_count() != f.bit_count():
            raise AdmissibilityError("identification collapses a face")
        out.append(g)
    return out


def handle_add_closed(c: Complex, psi: FacetBijection, check: bool = True,
                      field: FieldSpec = F2) -> Complex:
    """Combinatorial handle addition on a connected closed homology manifold."""
    if check:
        cls = classify(c, field)
        if not cls.is_closed:
            raise PreconditionError("handle_add_closed needs a closed homology manifold")
    if not is_admissible(c, psi, "closed"):
        raise AdmissibilityError("facet bijection is not admissible")
    drop = {to_mask(psi.source), to_mask(psi.target)}
    return Complex(_identify([f for f in c.facet_masks if f not in drop], psi.mapping()))


def handle_add_boundary(c: Complex, psi: FacetBijection, check: bool = True,
                        field: FieldSpec = F2) -> Complex:
    """Simplicial handle addition: identify v with psi(v), keeping both facets."""
    if check:
        cls = classify(c, field)
        if not cls.has_boundary:
            raise PreconditionError(
                "handle_add_boundary needs a homology manifold with boundary")
        if not is_admissible(c, psi, "boundary", field):
            raise AdmissibilityError("facet bijection is not admissible")
    elif not _pairs_admissible(c, psi.pairing):
        raise AdmissibilityError("facet bijection is not admissible")
    return Complex(_identify(c.facet_masks, psi.mapping()))


def connected_union(a: Complex, b: Complex, sigma: Face, tau: Face,
                    pairing: Optional[tuple[tuple[int, int], ...]] = None,
                    field: FieldSpec = F2) -> Complex:
    """Connected union of two complexes along boundary facets sigma ⊂ a, tau ⊂ b.

    ``b`` is shifted to labels above those of ``a`` first when the vertex
    sets overlap; ``tau`` and ``pairing`` use b's original labels.
    """
    offset = 0
    if a.vertex_mask & b.vertex_mask:
        offset = a.max_label() + 1
        b = shift_labels(b, offset)
    tau_s = tuple(t + offset for t in tau)
    if pairing is None:
        psi = FacetBijection.ordered(sigma, tau_s)
    else:
        psi = FacetBijection(tuple(sigma), tau_s, tuple((s, t + offset) for s, t in pairing))
    return handle_add_boundary(disjoint_union(a, b), psi, field=field)


# ---------------------------------------------------------------------------
# deletion


@dataclass(frozen=True)
class DeletionDecomposition:
    sigma: Face
    x: int
    y: int
    link_components: dict[int, tuple[Face, Face]]  # z_k -> (x-side, y-side) vertex sets
    R: frozenset[int]
    R_x: dict[int, frozenset[int]]
    R_y: dict[int, frozenset[int]]
    X: frozenset[int]
    Y: frozenset[int]
    fresh: dict[int, int]  # z_k -> z_k^+

    def faces(self, masks) -> list[Face]:
        return sorted((to_face(m) for m in masks), key=lambda f: (len(f), f))

    def x_piece(self, c: Complex, z: int) -> Complex:
        """x-component of lk(z) with respect to sigma minus z."""
        lk = link(c, 1 << z)
        rest = to_mask(self.sigma) & ~(1 << z)
        return induced(lk, to_mask(self.link_components[z][0]) | rest)

    def y_piece(self, c: Complex, z: int) -> Complex:
        lk = link(c, 1 << z)
        rest = to_mask(self.sigma) & ~(1 << z)
        return induced(lk, to_mask(self.link_components[z][1]) | rest)


def _split(c: Complex, sigma_mask: int, x: int, y: int) -> tuple[int, int]:
    """Vertex masks of the two components of c[V \\ sigma]; the first holds x."""
    rest = induced(c, c.vertex_mask & ~sigma_mask)
    comps = [to_mask(comp) for comp in connected_components(rest)] if rest.dim >= 0 else []
    if len(comps) != 2:
        raise PreconditionError(
            f"removing {to_face(sigma_mask)} leaves {len(comps)} components, expected 2")
    cx = next((m for m in comps if m >> x & 1), None)
    cy = next((m for m in comps if m >> y & 1), None)
    if cx is None or cy is None or cx == cy:
        raise PreconditionError("x and y do not lie in different components")
    return cx, cy


def deletion_decomposition(c: Complex, sigma: Face, field: FieldSpec = F2,
                           check: bool = True) -> DeletionDecomposition:
    """Face partition used to cut c open along the interior (d-1)-face sigma.

    The apex with the smaller label of the two facets through sigma is x.
    """
    d = c.dim
    s = to_mask(sigma)
    if check:
        cls = classify(c, field)
        if not cls.has_boundary:
            raise PreconditionError("deletion needs a homology manifold with boundary")
    if s.bit_count() != d or not c.has_face(s):
        raise PreconditionError(f"{tuple(sorted(sigma))} is not a (d-1)-face of the complex")
    star = c.star_facets(s)
    if len(star) != 2:
        raise PreconditionError(
            f"{to_face(s)} is not an interior (d-1)-face (it lies in {len(star)} facet(s))")
    bd = boundary_complex(c, field).face_masks()
    if s in bd:
        raise PreconditionError(f"{to_face(s)} is a boundary face")
    for v in bits(s):
        if (s ^ (1 << v)) not in bd:
            raise PreconditionError(
                f"the boundary of {to_face(s)} is not contained in the boundary complex")
    apexes = sorted((f & ~s).bit_length() - 1 for f in star)
    x, y = apexes

    comps: dict[int, tuple[Face, Face]] = {}
    R = frozenset(m for m in c.face_masks() if m & s and m & ~s)
    R_x: dict[int, frozenset[int]] = {}
    R_y: dict[int, frozenset[int]] = {}
    for z in bits(s):
        zb = 1 << z
        lk = link(c, zb)
        cx, cy = _split(lk, s & ~zb, x, y)
        comps[z] = (to_face(cx), to_face(cy))
        allowed_x = cx | (s & ~zb)
        allowed_y = cy | (s & ~zb)
        mine = [m for m in R if m & zb]
        R_x[z] = frozenset(m for m in mine if (m & ~zb) & allowed_x == (m & ~zb))
        R_y[z] = frozenset(m for m in mine if (m & ~zb) & allowed_y == (m & ~zb))
    X = frozenset().union(*R_x.values())
    Y = frozenset().union(*R_y.values())
    base = c.max_label() + 1
    fresh = {z: base + i for i, z in enumerate(bits(s))}
    dec = DeletionDecomposition(to_face(s), x, y, comps, R, R_x, R_y, X, Y, fresh)
    _validate(dec)
    return dec


def _validate(dec: DeletionDecomposition) -> None:
    if dec.X & dec.Y:
        raise AssertionError("decomposition invariant violated: X and Y intersect")
    if dec.X | dec.Y != dec.R:
        raise AssertionError("decomposition invariant violated: X ∪ Y != R")
    for z in dec.sigma:
        zb = 1 << z
        if frozenset(m for m in dec.X if m & zb) != dec.R_x[z]:
            raise AssertionError(f"decomposition invariant violated at z={z} (x side)")
        if frozenset(m for m in dec.Y if m & zb) != dec.R_y[z]:
            raise AssertionError(f"decomposition invariant violated at z={z} (y side)")


def handle_delete(c: Complex, sigma: Face, field: FieldSpec = F2,
                  check: bool = True) -> tuple[Complex, FacetBijection]:
    """Cut along sigma; returns the cut complex and the regluing bijection sigma+ -> sigma."""
    dec = deletion_decomposition(c, sigma, field, check=check)
    s = to_mask(dec.sigma)
    plus = dec.fresh

    def lift(m: int) -> int:
        out = m & ~s
        for z in bits(m & s):
            out |= 1 << plus[z]
        return out

    faces = [m for m in c.face_masks() if m not in dec.X]
    faces += [lift(m) for m in dec.X]
    sigma_plus = 0
    for z in bits(s):
        sigma_plus |= 1 << plus[z]
    faces.append(sigma_plus)
    cut = Complex(faces)
    psi = FacetBijection(to_face(sigma_plus), dec.sigma,
                         tuple((plus[z], z) for z in bits(s)))
    return cut, psi


# ---------------------------------------------------------------------------
# enumeration


def _candidate_facets(c: Complex, mode: Mode, field: FieldSpec) -> list[int]:
    if mode == "closed":
        return sorted(c.facet_masks)
    return sorted(boundary_complex(c, field).facet_masks)


def enumerate_admissible(c: Complex, mode: Mode = "closed", budget: Optional[int] = None,
                         field: FieldSpec = F2,
                         rng: Optional[random.Random] = None) -> Iterator[FacetBijection]:
    """Admissible (sigma, tau, psi) triples in lexicographic order, up to ``budget``.

    With ``rng`` the pair order and the per-pair pairing order are shuffled.
    """
    facets = _candidate_facets(c, mode, field)
    compat = _compatibility(c)
    pairs = [(a, b) for a in facets for b in facets if a != b and not a & b]
    if rng is not None:
        rng.shuffle(pairs)
    count = 0
    for a, b in pairs:
        src = list(bits(a))
        perms = list(permutations(bits(b)))
        if rng is not None:
            rng.shuffle(perms)
        for tgt in perms:
            if all(compat[v] >> w & 1 for v, w in zip(src, tgt)):
                yield FacetBijection(tuple(src), tuple(sorted(tgt)), tuple(zip(src, tgt)))
                count += 1
                if budget is not None and count >= budget:
                    return


def _compatibility(c: Complex) -> dict[int, int]:
    """For each vertex v, the mask of vertices w with lk(v) ∩ lk(w) = {∅}."""
    verts = list(bits(c.vertex_mask))
    nbr = {v: c.neighbors(v) for v in verts}
    out = {}
    for v in verts:
        m = 0
        for w in verts:
            if not nbr[v] & nbr[w]:
                m |= 1 << w
        out[v] = m
    return out


def find_admissible(c: Complex, mode: Mode, rng: random.Random,
                    field: FieldSpec = F2, facets: Optional[list[int]] = None
                    ) -> Optional[FacetBijection]:
    """First admissible bijection under a seeded shuffle, or None."""
    if facets is None:
        facets = _candidate_facets(c, mode, field)
    compat = _compatibility(c)
    order = list(facets)
    rng.shuffle(order)
    for a in order:
        src = list(bits(a))
        partners = [b for b in order
                    if not a & b and all(compat[v] & b for v in src)]
        rng.shuffle(partners)
        for b in partners:
            perms = list(permutations(bits(b)))
            rng.shuffle(perms)
            for tgt in perms:
                if all(compat[v] >> w & 1 for v, w in zip(src, tgt)):
                    return FacetBijection(tuple(src), tuple(sorted(tgt)),
                                          tuple(zip(src, tgt)))
    return None


def is_bounded_manifold(c: Complex, field: FieldSpec = F2) -> bool:
    return classify(c, field).verdict in (Verdict.BALL, Verdict.BOUNDED_MANIFOLD)
