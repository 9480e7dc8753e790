"""Reduced and relative simplicial homology over a field.

Simplices are oriented by increasing label; the boundary of
``[v_0 < ... < v_k]`` is ``sum (-1)^j [.. v_j omitted ..]``.  The chain
complex is augmented, so every Betti number here is reduced and the
complex ``{∅}`` has a single class in degree -1.
"""
from __future__ import annotations

from dataclasses import dataclass
from .complex import Complex, PreconditionError, bits, num_components
from .linalg import (
    F2,
    FieldSpec,
    kernel_rows,
    rank_dense_reference,
    rank_gf2_bits,
    row_rank,
)


@dataclass(frozen=True)
class BettiVector:
    """Reduced Betti numbers ``β̃_0..β̃_d``; ``minus_one`` is β̃_{-1}."""

    field: FieldSpec
    betti: tuple[int, ...]
    minus_one: int = 0

    def __getitem__(self, i: int) -> int:
        if i == -1:
            return self.minus_one
        if 0 <= i < len(self.betti):
            return self.betti[i]
        return 0

    def is_acyclic(self) -> bool:
        return self.minus_one == 0 and not any(self.betti)

    def is_sphere(self, e: int) -> bool:
        """Same reduced homology as the e-sphere (e = -1 means ``{∅}``)."""
        if e == -1:
            return self.minus_one == 1 and not any(self.betti)
        if self.minus_one:
            return False
        return all(b == (1 if i == e else 0) for i, b in enumerate(self.betti)) and (
            e < len(self.betti) and self.betti[e] == 1)

    def as_list(self) -> list[int]:
        return list(self.betti)


@dataclass(frozen=True)
class InducedMapReport:
    degree: int
    rank: int
    source_dim: int
    target_dim: int

    @property
    def injective(self) -> bool:
        return self.rank == self.source_dim


# ---------------------------------------------------------------------------
# chain data


def _faces_by_dim(c: Complex) -> list[list[int]]:
    return [sorted(c.face_masks(k)) for k in range(-1, c.dim + 1)]


def _boundary_rows(faces: list[int], index: dict[int, int]) -> list[dict[int, int]]:
    """Signed boundary of each face, as a sparse vector over ``index``."""
    rows = []
    for f in faces:
        r = {}
        sign = 1
        for v in bits(f):
            j = index.get(f ^ (1 << v))
            if j is not None:
                r[j] = sign
            sign = -sign
        rows.append(r)
    return rows


def _boundary_bits(faces: list[int], index: dict[int, int]) -> list[int]:
    rows = []
    for f in faces:
        m = 0
        for v in bits(f):
            j = index.get(f ^ (1 << v))
            if j is not None:
                m |= 1 << j
        rows.append(m)
    return rows


def _ranks(faces: list[list[int]], field: FieldSpec) -> list[int]:
    """``out[k]`` is the rank of the boundary map leaving ``faces[k]``.

    ``faces[k]`` holds the chains of dimension k-1.
    """
    out = [0] * (len(faces) + 1)
    for k in range(1, len(faces)):
        index = {m: j for j, m in enumerate(faces[k - 1])}
        if not faces[k] or not index:
            continue
        if field.characteristic == 2:
            out[k] = rank_gf2_bits(_boundary_bits(faces[k], index))
        else:
            out[k] = row_rank(_boundary_rows(faces[k], index), field)
    return out


def _betti_from(faces: list[list[int]], ranks: list[int], field: FieldSpec) -> BettiVector:
    # faces[0] is degree -1
    vals = [len(faces[k]) - ranks[k] - ranks[k + 1] for k in range(len(faces))]
    return BettiVector(field, tuple(vals[1:]), vals[0])


def betti(c: Complex, field: FieldSpec = F2, method: str = "sparse") -> BettiVector:
    """Reduced Betti numbers of ``c`` over ``field``.

    ``method="dense"`` runs a separate textbook elimination on dense
    matrices; it exists to cross-check the default sparse route.
    """
    d = c.dim
    if d == -1:
        return BettiVector(field, (), 1)
    if method == "sparse" and d <= 1:
        # graphs: rank of the vertex/edge boundary is f_0 - #components
        f0, f1 = c.num_vertices, len(c.face_masks(1))
        comps = num_components(c)
        b = (comps - 1, f1 - f0 + comps) if d == 1 else (comps - 1,)
        return BettiVector(field, b, 0)
    faces = _faces_by_dim(c)
    if method == "dense":
        ranks = [0] * (len(faces) + 1)
        for k in range(1, len(faces)):
            index = {m: j for j, m in enumerate(faces[k - 1])}
            rows = _boundary_rows(faces[k], index)
            dense = [[r.get(j, 0) for j in range(len(index))] for r in rows]
            ranks[k] = rank_dense_reference(dense, field) if dense else 0
    elif method == "sparse":
        ranks = _ranks(faces, field)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _betti_from(faces, ranks, field)


def euler_characteristic(c: Complex) -> int:
    """Unreduced Euler characteristic ``sum_{i>=0} (-1)^i f_i``."""
    return sum((-1) ** k * len(c.face_masks(k)) for k in range(0, c.dim + 1))


def is_subcomplex(sub: Complex, c: Complex) -> bool:
    return all(c.has_face(f) for f in sub.facet_masks)


def relative_betti(c: Complex, sub: Complex, field: FieldSpec = F2) -> BettiVector:
    """Betti numbers of the quotient chain complex C(c)/C(sub)."""
    if not is_subcomplex(sub, c):
        raise PreconditionError("relative homology needs sub to be a subcomplex")
    inner = sub.face_masks()
    faces = [[m for m in level if m not in inner] for level in _faces_by_dim(c)]
    ranks = _ranks(faces, field)
    vals = [len(faces[k]) - ranks[k] - ranks[k + 1] for k in range(len(faces))]
    return BettiVector(field, tuple(vals[1:]), vals[0])


def _cycle_basis(faces_i: list[int], faces_lower: list[int],
                 field: FieldSpec) -> list[dict[int, int]]:
    """Basis of ker(∂_i), as vectors indexed by position in ``faces_i``."""
    if not faces_lower:  # degree -1: everything is a cycle
        return [{j: 1} for j in range(len(faces_i))]
    lower = {m: j for j, m in enumerate(faces_lower)}
    transposed: list[dict[int, int]] = [{} for _ in faces_lower]
    for col, r in enumerate(_boundary_rows(faces_i, lower)):
        for j, v in r.items():
            transposed[j][col] = v
    return kernel_rows(transposed, len(faces_i), field)


def inclusion_induced(a: Complex, b: Complex, i: int,
                      field: FieldSpec = F2) -> InducedMapReport:
    """Rank of H̃_i(a) -> H̃_i(b) induced by the inclusion a ⊆ b.

    No homology bases are chosen: the image is (Z_i(a) + B_i(b)) / B_i(b),
    so its dimension is rank[Z_i(a); B_i(b)] - rank B_i(b).
    """
    if not is_subcomplex(a, b):
        raise PreconditionError("inclusion_induced needs a to be a subcomplex of b")
    if i < -1:
        raise ValueError("degree must be >= -1")
    a_i = sorted(a.face_masks(i))
    b_i = sorted(b.face_masks(i))
    b_index = {m: j for j, m in enumerate(b_i)}

    def bd_rows(cplx: Complex, index: dict[int, int]) -> list[dict[int, int]]:
        return _boundary_rows(sorted(cplx.face_masks(i + 1)), index)

    z_a = _cycle_basis(a_i, sorted(a.face_masks(i - 1)) if i >= 0 else [], field)
    a_index = {m: j for j, m in enumerate(a_i)}
    rank_bd_a = row_rank(bd_rows(a, a_index), field) if a_i else 0
    source_dim = len(z_a) - rank_bd_a

    b_bd = bd_rows(b, b_index)
    rank_bd_b = row_rank(b_bd, field) if b_i else 0
    z_b = len(_cycle_basis(b_i, sorted(b.face_masks(i - 1)) if i >= 0 else [], field))
    target_dim = z_b - rank_bd_b

    if source_dim == 0:
        return InducedMapReport(i, 0, 0, target_dim)
    lifted = [{b_index[a_i[j]]: v for j, v in z.items()} for z in z_a]
    image = row_rank(lifted + b_bd, field) - rank_bd_b
    return InducedMapReport(i, image, source_dim, target_dim)


def is_orientable(c: Complex, field: FieldSpec = F2) -> bool:
    """Top (relative) homology is one-dimensional, for a connected homology manifold."""
    from .recognition import boundary_complex

    if num_components(c) != 1:
        raise PreconditionError("orientability is defined for connected complexes")
    d = c.dim
    bd = boundary_complex(c, field)
    if bd.dim == -1:
        return betti(c, field)[d] == 1
    return relative_betti(c, bd, field)[d] == 1
