"""Finite abstract simplicial complexes given by their facets.

Faces are handled internally as integer bitmasks in which bit ``v`` is set
when vertex label ``v`` belongs to the face.  Labels are preserved exactly
as given (no compaction), so a mask can be large when labels are large;
every operation stays correct, only slower.  The public API speaks in
sorted tuples of labels.
"""
from __future__ import annotations

from collections import deque
from math import comb
from typing import Iterable, Iterator, Optional, Sequence

Face = tuple[int, ...]


class PreconditionError(ValueError):
    """An operation was called on an input outside its domain."""


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        v = int(v)
        if v < 0:
            raise ValueError(f"vertex labels must be non-negative, got {v}")
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Yield the labels in ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_face(mask: int) -> Face:
    return tuple(bits(mask))


def _maximal(masks: Iterable[int]) -> frozenset[int]:
    """Drop every mask contained in another one."""
    ordered = sorted(set(masks), key=lambda m: -m.bit_count())
    kept: list[int] = []
    for m in ordered:
        if not any(m & k == m for k in kept if k != m):
            kept.append(m)
    return frozenset(kept)


class Complex:
    """An immutable simplicial complex, stored as its set of facets.

    The minimal complex is ``{∅}`` (single empty facet); the void complex
    is not representable.
    """

    __slots__ = ("_facets", "_faces", "_star", "_vmask", "__weakref__")

    def __init__(self, facet_masks: Iterable[int], _trusted: bool = False):
        fs = frozenset(facet_masks) if _trusted else _maximal(facet_masks)
        if not fs:
            raise ValueError("a complex needs at least one facet")
        self._facets = fs
        self._faces: Optional[dict] = None
        self._star: Optional[dict[int, tuple[int, ...]]] = None
        vm = 0
        for f in fs:
            vm |= f
        self._vmask = vm

    # construction ---------------------------------------------------------

    @classmethod
    def from_masks(cls, masks: Iterable[int]) -> "Complex":
        return cls(masks)

    # basic data -----------------------------------------------------------

    @property
    def facet_masks(self) -> frozenset[int]:
        return self._facets

    @property
    def facets(self) -> list[Face]:
        return sorted(to_face(f) for f in self._facets)

    @property
    def vertex_mask(self) -> int:
        return self._vmask

    @property
    def vertices(self) -> Face:
        return to_face(self._vmask)

    @property
    def num_vertices(self) -> int:
        return self._vmask.bit_count()

    @property
    def dim(self) -> int:
        return max(f.bit_count() for f in self._facets) - 1

    def is_pure(self) -> bool:
        sizes = {f.bit_count() for f in self._facets}
        return len(sizes) == 1

    def max_label(self) -> int:
        return self._vmask.bit_length() - 1

    # faces ----------------------------------------------------------------

    def _face_table(self) -> dict[Optional[int], frozenset[int]]:
        if self._faces is None:
            every = {0}
            for f in self._facets:
                sub = f
                while sub:
                    every.add(sub)
                    sub = (sub - 1) & f
            table: dict[Optional[int], set[int]] = {}
            for m in every:
                table.setdefault(m.bit_count() - 1, set()).add(m)
            faces: dict[Optional[int], frozenset[int]] = {k: frozenset(v) for k, v in table.items()}
            faces[None] = frozenset(every)
            self._faces = faces
        return self._faces

    def face_masks(self, dim: Optional[int] = None) -> frozenset[int]:
        """Masks of all faces, or of the faces of one dimension."""
        return self._face_table().get(dim, frozenset())

    def faces(self, dim: Optional[int] = None) -> list[Face]:
        return sorted(to_face(m) for m in self.face_masks(dim))

    def has_face(self, face: Iterable[int] | int) -> bool:
        m = face if isinstance(face, int) else to_mask(face)
        if m & ~self._vmask:
            return False
        return any(m & f == m for f in self._facets)

    __contains__ = has_face

    def star_facets(self, mask: int) -> list[int]:
        """Facets containing the face ``mask``."""
        if self._star is None:
            star: dict[int, list[int]] = {}
            for f in self._facets:
                for v in bits(f):
                    star.setdefault(v, []).append(f)
            self._star = {v: tuple(fs) for v, fs in star.items()}
        if mask == 0:
            return list(self._facets)
        low = (mask & -mask).bit_length() - 1
        return [f for f in self._star.get(low, ()) if f & mask == mask]

    def neighbors(self, v: int) -> int:
        """Mask of the vertices adjacent to ``v``."""
        m = 0
        for f in self.star_facets(1 << v):
            m |= f
        return m & ~(1 << v)

    def edges(self) -> list[tuple[int, int]]:
        return [to_face(m) for m in sorted(self.face_masks(1))]  # type: ignore[misc]

    # comparisons ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return self._facets == other._facets

    def __hash__(self) -> int:
        return hash(self._facets)

    def __repr__(self) -> str:
        shown = self.facets
        body = ", ".join("{" + ",".join(map(str, f)) + "}" for f in shown[:6])
        if len(shown) > 6:
            body += f", ... ({len(shown)} facets)"
        return f"Complex([{body}])"


# ---------------------------------------------------------------------------
# constructors


def from_facets(raw: Iterable[Iterable[int]]) -> Complex:
    """Build a complex from vertex sets; entries inside other entries are dropped."""
    masks = [to_mask(r) for r in raw]
    if not masks:
        raise ValueError("from_facets needs at least one vertex set")
    return Complex(masks)


def simplex(d: int) -> Complex:
    if d < 0:
        raise ValueError("simplex dimension must be >= 0")
    return Complex([(1 << (d + 1)) - 1], _trusted=True)


def boundary_simplex(d: int) -> Complex:
    """The boundary of the d-simplex on labels 0..d."""
    if d < 1:
        raise ValueError("boundary_simplex needs d >= 1")
    full = (1 << (d + 1)) - 1
    return Complex([full ^ (1 << v) for v in range(d + 1)], _trusted=True)


def void_link() -> Complex:
    """The complex ``{∅}``."""
    return Complex([0], _trusted=True)


# ---------------------------------------------------------------------------
# combinatorial operations


def f_vector(c: Complex) -> tuple[int, ...]:
    """Face counts ``(f_{-1}, f_0, ..., f_d)``."""
    return tuple(len(c.face_masks(k)) for k in range(-1, c.dim + 1))


def link(c: Complex, face: Iterable[int] | int) -> Complex:
    m = face if isinstance(face, int) else to_mask(face)
    star = c.star_facets(m)
    if not star:
        raise PreconditionError(f"{to_face(m)} is not a face of the complex")
    return Complex([f & ~m for f in star], _trusted=True)


def induced(c: Complex, vertices: Iterable[int] | int) -> Complex:
    w = vertices if isinstance(vertices, int) else to_mask(vertices)
    return Complex([f & w for f in c.facet_masks])


def cone(c: Complex, v: int) -> Complex:
    if c.vertex_mask >> v & 1:
        raise PreconditionError(f"cone apex {v} is already a vertex")
    apex = 1 << v
    return Complex([f | apex for f in c.facet_masks], _trusted=True)


def disjoint_union(a: Complex, b: Complex) -> Complex:
    if a.vertex_mask & b.vertex_mask:
        raise PreconditionError("complexes share vertex labels")
    return Complex([f for f in a.facet_masks | b.facet_masks if f])


def relabel(c: Complex, mapping: dict[int, int]) -> Complex:
    """Apply an injective vertex relabelling (unlisted labels are kept)."""
    out = []
    for f in c.facet_masks:
        out.append(to_mask(mapping.get(v, v) for v in bits(f)))
    r = Complex(out)
    if r.num_vertices != c.num_vertices or len(r.facet_masks) != len(c.facet_masks):
        raise ValueError("relabelling is not injective on the vertex set")
    return r


def shift_labels(c: Complex, offset: int) -> Complex:
    return Complex([f << offset for f in c.facet_masks], _trusted=True)


def missing_faces(c: Complex, k: int) -> list[Face]:
    """All missing k-faces: (k+1)-sets outside c whose proper subsets are faces."""
    if k < 1:
        raise ValueError("missing faces are defined for k >= 1")
    lower = c.face_masks(k - 1)
    if not lower:
        return []
    present = c.face_masks(k)
    vm = c.vertex_mask
    found = set()
    for f in lower:
        # extend by labels above the face's largest label
        above = vm & ~((1 << f.bit_length()) - 1)
        for v in bits(above):
            cand = f | (1 << v)
            if cand in present or cand in found:
                continue
            if all((cand ^ (1 << u)) in lower for u in bits(cand)):
                found.add(cand)
    return sorted(to_face(m) for m in found)


def is_neighborly(c: Complex) -> bool:
    n = c.num_vertices
    return len(c.face_masks(1)) == comb(n, 2)


def adjacency(c: Complex) -> dict[int, set[int]]:
    """The 1-skeleton as an adjacency map over labels."""
    adj: dict[int, set[int]] = {v: set() for v in bits(c.vertex_mask)}
    for e in c.face_masks(1):
        a, b = bits(e)
        adj[a].add(b)
        adj[b].add(a)
    return adj


def connected_components(c: Complex) -> list[Face]:
    """Vertex sets of the components of the 1-skeleton, sorted."""
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in c.facet_masks:
        vs = list(bits(f))
        for v in vs:
            parent.setdefault(v, v)
        for v in vs[1:]:
            ra, rb = find(vs[0]), find(v)
            if ra != rb:
                parent[rb] = ra
    groups: dict[int, list[int]] = {}
    for v in sorted(parent):
        groups.setdefault(find(v), []).append(v)
    return sorted(tuple(g) for g in groups.values())


def num_components(c: Complex) -> int:
    return len(connected_components(c))


# ---------------------------------------------------------------------------
# chordality


def lex_bfs(adj: dict[int, set[int]]) -> list[int]:
    """Lexicographic breadth-first search order (partition refinement)."""
    order: list[int] = []
    classes: list[list[int]] = [sorted(adj)] if adj else []
    visited: set[int] = set()
    while classes:
        first = classes[0]
        v = first.pop(0)
        if not first:
            classes.pop(0)
        order.append(v)
        visited.add(v)
        refined: list[list[int]] = []
        for cls in classes:
            inside = [u for u in cls if u in adj[v]]
            outside = [u for u in cls if u not in adj[v]]
            if inside:
                refined.append(inside)
            if outside:
                refined.append(outside)
        classes = refined
    return order


def _induced_cycle_through(adj, v, u, w) -> Optional[list[int]]:
    """Shortest u-w path avoiding N[v] (except u, w), closed up through v."""
    blocked = (adj[v] | {v}) - {u, w}
    prev = {u: None}
    queue = deque([u])
    while queue:
        a = queue.popleft()
        if a == w:
            path = []
            while a is not None:
                path.append(a)
                a = prev[a]
            return [v] + path[::-1]
        for b in sorted(adj[a]):
            if b not in prev and b not in blocked:
                prev[b] = a
                queue.append(b)
    return None


def _find_induced_cycle(adj, hint=None) -> Optional[list[int]]:
    if hint is not None:
        cyc = _induced_cycle_through(adj, *hint)
        if cyc is not None:
            return cyc
    for v in sorted(adj):
        nb = sorted(adj[v])
        for i, u in enumerate(nb):
            for w in nb[i + 1:]:
                if w in adj[u]:
                    continue
                cyc = _induced_cycle_through(adj, v, u, w)
                if cyc is not None:
                    return cyc
    return None


def chordal_witness(adj: dict[int, set[int]]) -> Optional[list[int]]:
    """None when the graph is chordal, else an induced cycle of length >= 4.

    Decided by checking that the reverse Lex-BFS order is a perfect
    elimination ordering; the witness is extracted by path search.
    """
    order = lex_bfs(adj)
    peo = order[::-1]
    pos = {v: i for i, v in enumerate(peo)}
    for v in peo:
        later = [u for u in adj[v] if pos[u] > pos[v]]
        if len(later) < 2:
            continue
        parent = min(later, key=pos.__getitem__)
        for w in later:
            if w != parent and w not in adj[parent]:
                cyc = _find_induced_cycle(adj, (v, parent, w))
                if cyc is None:  # pragma: no cover - contradicts PEO theory
                    raise AssertionError("non-chordal graph without induced cycle")
                return cyc
    return None


def is_chordal_skeleton(c: Complex) -> bool:
    return chordal_witness(adjacency(c)) is None


# ---------------------------------------------------------------------------
# isomorphism


def isomorphism(a: Complex, b: Complex) -> Optional[dict[int, int]]:
    """A vertex map sending the facets of ``a`` onto those of ``b``, if any."""
    import networkx as nx
    from networkx.algorithms import isomorphism as iso

    if (f_vector(a) != f_vector(b)
            or sorted(f.bit_count() for f in a.facet_masks)
            != sorted(f.bit_count() for f in b.facet_masks)):
        return None

    def incidence(c: Complex) -> "nx.Graph":
        g = nx.Graph()
        for v in bits(c.vertex_mask):
            g.add_node(("v", v), kind="v")
        for f in c.facet_masks:
            g.add_node(("f", f), kind="f")
            for v in bits(f):
                g.add_edge(("v", v), ("f", f))
        return g

    gm = iso.GraphMatcher(incidence(a), incidence(b),
                          node_match=lambda x, y: x["kind"] == y["kind"])
    if not gm.is_isomorphic():
        return None
    return {k[1]: v[1] for k, v in gm.mapping.items() if k[0] == "v"}


def are_isomorphic(a: Complex, b: Complex) -> bool:
    return isomorphism(a, b) is not None


def sorted_faces(masks: Sequence[int]) -> list[Face]:
    return sorted(to_face(m) for m in masks)
