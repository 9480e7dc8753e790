"""Brute-force tightness and the numeric stackedness criteria for closed manifolds."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb
from typing import Optional

from .complex import (
    Complex,
    Face,
    PreconditionError,
    bits,
    f_vector,
    induced,
    is_neighborly,
    missing_faces,
    num_components,
    to_mask,
)
from .homology import betti, inclusion_induced, is_orientable
from .linalg import F2, FieldSpec
from .recognition import classify
from .stacked import is_locally_stacked, is_stacked_closed

DEFAULT_GUARD = 16


class GuardExceeded(PreconditionError):
    """Too many vertices for the exhaustive subset scan."""


@dataclass(frozen=True)
class TightnessReport:
    field: FieldSpec
    tight: bool
    witness: Optional[tuple[Face, int]] = None
    subsets_checked: int = 0
    reason: str = ""


def _is_cone(sub: Complex) -> bool:
    apex = sub.vertex_mask
    for f in sub.facet_masks:
        apex &= f
    return apex != 0


def _failures(c: Complex, field: FieldSpec, subsets: list[tuple[int, ...]]
              ) -> list[tuple[tuple[int, ...], int]]:
    """Non-injective (W, i) pairs among ``subsets``, i >= 0."""
    out = []
    full = c.vertex_mask
    for w in subsets:
        wm = to_mask(w)
        if wm == full:
            continue  # the identity map
        sub = induced(c, wm)
        if sub.dim < 0 or _is_cone(sub):
            continue
        b = betti(sub, field)
        for i in range(0, sub.dim + 1):
            if b[i] and not inclusion_induced(sub, c, i, field).injective:
                out.append((w, i))
    return out


def _rank_key(item) -> tuple:
    w, i = item
    # degree >= 1 witnesses first: a degree-0 failure only says W is disconnected
    return (i == 0, len(w), w, i)


def _chunks(verts: list[int]):
    for size in range(len(verts) + 1):
        yield list(combinations(verts, size))


def is_tight(c: Complex, field: FieldSpec = F2, guard_max_vertices: int = DEFAULT_GUARD,
             workers: Optional[int] = None) -> TightnessReport:
    """Exhaustive F-tightness over all vertex subsets W and degrees i >= 0.

    Subsets whose induced complex is a cone or has no reduced homology are
    skipped (their maps are trivially injective).  The scan runs by
    increasing |W|, lexicographically inside a size; it stops at the end
    of the first size that holds a failure in degree >= 1.  The witness is
    the first such failure, or the first degree-0 failure if nothing else
    fails.  ``workers`` > 1 spreads each size over processes; the report
    does not depend on it.
    """
    n = c.num_vertices
    if n > guard_max_vertices:
        raise GuardExceeded(
            f"{n} vertices exceeds the tightness guard of {guard_max_vertices}")
    if num_components(c) != 1:
        return TightnessReport(field, False, None, 0, "complex is not connected")
    verts = list(bits(c.vertex_mask))
    checked = 0
    low: Optional[tuple] = None
    pool = ProcessPoolExecutor(workers) if workers and workers > 1 else None
    try:
        for level in _chunks(verts):
            if pool is not None and len(level) > 64:
                step = -(-len(level) // (4 * workers))
                parts = [level[i:i + step] for i in range(0, len(level), step)]
                fails = [x for part in pool.map(_failures, [c] * len(parts),
                                                [field] * len(parts), parts) for x in part]
            else:
                fails = _failures(c, field, level)
            checked += len(level)
            if not fails:
                continue
            best = min(fails, key=_rank_key)
            if best[1] >= 1:
                return TightnessReport(field, False, best, checked,
                                       f"H_{best[1]} of the induced subcomplex does not inject")
            if low is None:
                low = best
    finally:
        if pool is not None:
            pool.shutdown()
    if low is not None:
        return TightnessReport(field, False, low, checked,
                               "an induced subcomplex is disconnected")
    return TightnessReport(field, True, None, checked)


def threads_from_env() -> Optional[int]:
    raw = os.environ.get("STACKWALK_THREADS")
    if not raw:
        return None
    try:
        val = int(raw)
    except ValueError:
        raise PreconditionError(f"STACKWALK_THREADS must be an integer, got {raw!r}")
    return max(1, val)


# ---------------------------------------------------------------------------
# numeric criteria


@dataclass(frozen=True)
class CriteriaReport:
    d: int
    f0: int
    f1: int
    beta1: int
    beta1_f2: int
    ns_lhs: int
    ns_rhs: int
    tight_neighborly: bool
    bagchi_equal: Optional[bool] = None
    bds_equal: Optional[bool] = None

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _require_closed(c: Complex, field: FieldSpec, min_dim: int = 3) -> int:
    d = c.dim
    if d < min_dim:
        raise PreconditionError(f"needs a closed homology manifold of dimension >= {min_dim}")
    if num_components(c) != 1:
        raise PreconditionError("needs a connected complex")
    if not classify(c, field).is_closed:
        raise PreconditionError("needs a closed homology manifold")
    return d


def criteria(c: Complex, field: FieldSpec = F2) -> CriteriaReport:
    """The f-vector / Betti number identities for a connected closed d-manifold, d >= 3."""
    d = _require_closed(c, field)
    fv = f_vector(c)
    f0, f1 = fv[1], fv[2]
    b1 = betti(c, field)[1]
    b1_2 = b1 if field.characteristic == 2 else betti(c, F2)[1]
    k = comb(d + 2, 2)
    ns_lhs = f1 - (d + 1) * f0 + k
    return CriteriaReport(
        d=d, f0=f0, f1=f1, beta1=b1, beta1_f2=b1_2,
        ns_lhs=ns_lhs, ns_rhs=k * b1,
        tight_neighborly=comb(f0 - d - 1, 2) == k * b1_2,
        bagchi_equal=(f1 - 4 * f0 + 10 == 10 * b1) if d == 3 else None,
        bds_equal=((f0 - 4) * (f0 - 5) == 20 * b1) if d == 3 else None,
    )


def missing_face_vanishing_check(c: Complex, field: FieldSpec = F2) -> bool:
    """No missing k-faces wherever the (k-1)-st reduced Betti number vanishes."""
    b = betti(c, field)
    return all(b[k - 1] or not missing_faces(c, k) for k in range(1, c.dim + 2))


@dataclass(frozen=True)
class EquivalenceReport:
    d: int
    field: FieldSpec
    orientable: bool
    legs: dict[str, Optional[bool]] = dc_field(default_factory=dict)
    notes: tuple[str, ...] = ()

    @property
    def agree(self) -> bool:
        vals = {v for v in self.legs.values() if v is not None}
        return len(vals) <= 1

    @property
    def counterexample(self) -> bool:
        return self.orientable and not self.agree


def equivalence_report(c: Complex, field: FieldSpec = F2, guard_max_vertices: int = DEFAULT_GUARD,
                       certificate=None, workers: Optional[int] = None,
                       tight: Optional[TightnessReport] = None) -> EquivalenceReport:
    """Evaluate each condition of the tight / neighborly-stacked equivalences separately.

    d >= 4 legs: tight-neighborly, neighborly member of the closed class,
    neighborly + stacked, neighborly + locally stacked, tight with
    β_i = 0 for 1 < i < d-1.  d = 3 legs: F-tight, neighborly + stacked,
    neighborly member, and the quadratic f_0 identity.  Membership uses
    ``certificate`` when given, else the equality criterion that
    characterizes the class.  A leg is None when it was skipped.
    """
    from .generators import verify_certificate

    d = _require_closed(c, field)
    cr = criteria(c, field)
    neighborly = is_neighborly(c)
    notes = []
    orientable = is_orientable(c, field)
    if not orientable:
        notes.append(f"not orientable over {field}; the equivalences are not claimed")

    if certificate is not None:
        member = bool(verify_certificate(c, certificate))
        notes.append("membership from certificate")
    else:
        member = cr.bagchi_equal if d == 3 else cr.ns_lhs == cr.ns_rhs
        notes.append("membership from the equality criterion")

    if tight is None:
        try:
            tight = is_tight(c, field, guard_max_vertices, workers)
        except GuardExceeded as exc:
            notes.append(f"tightness skipped: {exc}")
    tight_val = None if tight is None else tight.tight
    b = betti(c, field)
    vanish = all(b[i] == 0 for i in range(2, d - 1))

    legs: dict[str, Optional[bool]] = {}
    if d == 3:
        legs["tight"] = tight_val
        legs["neighborly_and_stacked"] = neighborly and is_stacked_closed(c, field, check=False)
        legs["neighborly_member"] = neighborly and member
        legs["quadratic_identity"] = cr.bds_equal
    else:
        legs["tight_neighborly"] = cr.tight_neighborly
        legs["neighborly_member"] = neighborly and member
        legs["neighborly_and_stacked"] = neighborly and is_stacked_closed(c, field, check=False)
        legs["neighborly_and_locally_stacked"] = neighborly and is_locally_stacked(
            c, field, check=False)
        legs["tight_and_vanishing"] = None if tight_val is None else (tight_val and vanish)
    return EquivalenceReport(d, field, orientable, legs, tuple(notes))
