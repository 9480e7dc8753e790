"""Seeded constructors for stacked balls, stacked spheres and Walkup-class members.

Every generator returns the complex together with a ``Certificate``: a
tree of simplices followed by simplicial handle additions.  Replaying a
certificate is label-exact.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Literal, Optional

from .complex import Complex, PreconditionError, bits, isomorphism, is_neighborly, to_face, to_mask
from .recognition import boundary_complex, boundary_ridges
from .stacked import TreeCertificate, tree_certificate
from .surgery import AdmissibilityError, FacetBijection, _identify, _pairs_admissible, find_admissible

Kind = Literal["ball", "closed"]


class GenerationError(RuntimeError):
    """A generator exhausted its growth or search budget."""


@dataclass(frozen=True)
class Certificate:
    kind: Kind
    d: int
    base: TreeCertificate
    handles: tuple[FacetBijection, ...] = ()
    seed: Optional[int] = None

    @property
    def k(self) -> int:
        return len(self.handles)

    def replay(self) -> Complex:
        c, _ = _replay(self)
        if c is None:
            raise PreconditionError("certificate does not replay")
        return c

    def to_json(self) -> dict:
        return {"kind": self.kind, "d": self.d, "k": self.k, "seed": self.seed,
                "base": self.base.to_json(),
                "handles": [h.to_json() for h in self.handles]}

    @classmethod
    def from_json(cls, doc: dict) -> "Certificate":
        if doc.get("kind") not in ("ball", "closed"):
            raise ValueError(f"unknown certificate kind {doc.get('kind')!r}")
        try:
            handles = tuple(FacetBijection.from_json(h) for h in doc.get("handles", []))
            base = TreeCertificate.from_json(doc["base"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed certificate: {exc}") from None
        if "k" in doc and int(doc["k"]) != len(handles):
            raise ValueError("certificate k does not match the number of handles")
        return cls(doc["kind"], int(doc["d"]), base, handles, doc.get("seed"))


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    step: Optional[int] = None  # 0 = base, j = j-th handle, k+1 = final comparison
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _apply_handle(c: Complex, psi: FacetBijection) -> Complex:
    ridges = set(boundary_ridges(c))
    for f in (psi.source, psi.target):
        if to_mask(f) not in ridges:
            raise AdmissibilityError(f"{f} is not a boundary facet")
    if not _pairs_admissible(c, psi.pairing):
        raise AdmissibilityError("facet bijection is not admissible")
    return Complex(_identify(c.facet_masks, psi.mapping()))


def _replay(cert: Certificate) -> tuple[Optional[Complex], VerifyResult]:
    if cert.base.dim != cert.d:
        return None, VerifyResult(False, 0, "base dimension does not match d")
    try:
        c = cert.base.build()
    except ValueError as exc:
        return None, VerifyResult(False, 0, str(exc))
    for j, psi in enumerate(cert.handles, 1):
        try:
            c = _apply_handle(c, psi)
        except (AdmissibilityError, PreconditionError) as exc:
            return None, VerifyResult(False, j, str(exc))
    if cert.kind == "closed":
        c = boundary_complex(c)
    return c, VerifyResult(True)


def verify_certificate(c: Complex, cert: Certificate) -> VerifyResult:
    """Replay ``cert`` and compare facet sets exactly."""
    out, res = _replay(cert)
    if out is None:
        return res
    if out.facet_masks != c.facet_masks:
        extra = sorted(out.facet_masks - c.facet_masks)
        missing = sorted(c.facet_masks - out.facet_masks)
        detail = []
        if extra:
            detail.append(f"replay has {to_face(extra[0])} not in the complex")
        if missing:
            detail.append(f"complex has {to_face(missing[0])} not in the replay")
        return VerifyResult(False, cert.k + 1, "; ".join(detail))
    return VerifyResult(True)


# ---------------------------------------------------------------------------
# stacked balls and spheres


def _grow_tree(d: int, num_facets: int, rng: random.Random,
               bias: float = 0.0) -> TreeCertificate:
    # with probability ``bias`` the new simplex goes on a free ridge of the newest one
    first = tuple(range(d + 1))
    facets = [first]
    gluings: list[Optional[tuple[int, ...]]] = [None]
    fm = to_mask(first)
    free = sorted(fm ^ (1 << v) for v in bits(fm))
    nxt = d + 1
    for _ in range(num_facets - 1):
        newest = [i for i, r in enumerate(free) if r >> (nxt - 1) & 1]
        if bias and newest and rng.random() < bias:
            ridge = free.pop(rng.choice(newest))
        else:
            ridge = free.pop(rng.randrange(len(free)))
        f = ridge | (1 << nxt)
        nxt += 1
        free.extend(f ^ (1 << v) for v in bits(ridge))
        free.sort()
        facets.append(to_face(f))
        gluings.append(to_face(ridge))
    return TreeCertificate(d, tuple(facets), tuple(gluings))


def gen_stacked_ball(d: int, num_facets: int, seed: int) -> tuple[Complex, Certificate]:
    """Tree of ``num_facets`` d-simplices; each new simplex lands on a random free ridge."""
    if d < 1 or num_facets < 1:
        raise ValueError("gen_stacked_ball needs d >= 1 and num_facets >= 1")
    tree = _grow_tree(d, num_facets, random.Random(seed))
    return tree.build(), Certificate("ball", d, tree, (), seed)


def gen_stacked_sphere(e: int, n_vertices: int, seed: int) -> tuple[Complex, Certificate]:
    """Stacked e-sphere on ``n_vertices`` vertices, as the boundary of a stacked ball."""
    if e < 2 or n_vertices < e + 2:
        raise ValueError("gen_stacked_sphere needs e >= 2 and n_vertices >= e + 2")
    ball, cert = gen_stacked_ball(e + 1, n_vertices - e - 1, seed)
    return boundary_complex(ball), Certificate("closed", e + 1, cert.base, (), seed)


# ---------------------------------------------------------------------------
# Walkup classes


def _add_handles(base: TreeCertificate, k: int, rng: random.Random
                 ) -> Optional[tuple[Complex, tuple[FacetBijection, ...]]]:
    c = base.build()
    handles = []
    for _ in range(k):
        psi = find_admissible(c, "boundary", rng, facets=boundary_ridges(c))
        if psi is None:
            return None
        c = Complex(_identify(c.facet_masks, psi.mapping()))
        handles.append(psi)
    return c, tuple(handles)


def gen_hbar_member(d: int, k: int, base_facets: int, seed: int,
                    max_growth: Optional[int] = None) -> tuple[Complex, Certificate]:
    """Member of the ball class with k handles, grown from a seeded stacked d-ball.

    When some handle finds no admissible pair, the base gets one more facet
    and the whole construction restarts; after ``8 (d+1) k`` extra facets
    this gives up with ``GenerationError``.  Retries grow the base with a
    bias toward long paths, since bushy trees rarely have disjoint stars.
    """
    if d < 2 or k < 0 or base_facets < 1:
        raise ValueError("gen_hbar_member needs d >= 2, k >= 0, base_facets >= 1")
    limit = 8 * (d + 1) * k if max_growth is None else max_growth
    master = random.Random(seed)
    for extra in range(limit + 1):
        bias = 0.0 if extra == 0 else 0.75
        tree = _grow_tree(d, base_facets + extra, random.Random(master.getrandbits(64)), bias)
        got = _add_handles(tree, k, random.Random(master.getrandbits(64)))
        if got is not None:
            c, handles = got
            return c, Certificate("ball", d, tree, handles, seed)
    raise GenerationError(
        f"no admissible handle sequence for d={d}, k={k} after growing the base "
        f"from {base_facets} to {base_facets + limit} facets")


def gen_walkup_closed(d: int, k: int, base_facets: int, seed: int,
                      max_growth: Optional[int] = None) -> tuple[Complex, Certificate]:
    """Closed (d-1)-manifold with k handles: the boundary of ``gen_hbar_member``."""
    if d < 3:
        raise ValueError("gen_walkup_closed needs d >= 3")
    ball, cert = gen_hbar_member(d, k, base_facets, seed, max_growth)
    return boundary_complex(ball), Certificate("closed", d, cert.base, cert.handles, seed)


def search_neighborly_walkup(d: int, n: int, k: int, seed: int, budget: int
                             ) -> Optional[tuple[Complex, Certificate]]:
    """Random search for an n-vertex neighborly closed member with k handles.

    A stacked d-ball with m facets has d + m vertices and each handle removes
    d of them, so the base has ``n - d + d k`` facets.  Each of ``budget``
    trials draws a fresh base and handle sequence; bases are grown with a
    random bias toward long paths of simplices, whose far ends are the
    likeliest admissible pairs.
    """
    m = n - d + d * k
    if d < 3 or m < 1 or k < 0:
        return None
    master = random.Random(seed)
    for _ in range(budget):
        grow = random.Random(master.getrandbits(64))
        tree = _grow_tree(d, m, grow, bias=grow.uniform(0.5, 1.0))
        got = _add_handles(tree, k, random.Random(master.getrandbits(64)))
        if got is None:
            continue
        ball, handles = got
        # the boundary carries every edge of the ball
        if ball.num_vertices == n and is_neighborly(ball):
            return boundary_complex(ball), Certificate("closed", d, tree, handles, seed)
    return None


# ---------------------------------------------------------------------------
# certificate algebra


def relabel_certificate(cert: Certificate, mapping: dict[int, int]) -> Certificate:
    """Apply an injective relabeling to every label in the certificate.

    Labels absent from ``mapping`` go to fresh labels above everything used.
    """
    used = set()
    for f in cert.base.facets:
        used.update(f)
    for h in cert.handles:
        used.update(h.source)
        used.update(h.target)
    full = dict(mapping)
    top = max(list(full.values()) + list(used)) + 1
    for v in sorted(used):
        if v not in full:
            full[v] = top
            top += 1
    if len(set(full.values())) != len(full):
        raise ValueError("relabeling is not injective")
    f = lambda face: tuple(sorted(full[v] for v in face))  # noqa: E731
    base = TreeCertificate(cert.base.dim, tuple(f(x) for x in cert.base.facets),
                           tuple(None if g is None else f(g) for g in cert.base.gluings))
    handles = tuple(FacetBijection(f(h.source), f(h.target),
                                   tuple((full[a], full[b]) for a, b in h.pairing))
                    for h in cert.handles)
    return Certificate(cert.kind, cert.d, base, handles, cert.seed)


def _composite_map(cert: Certificate) -> dict[int, int]:
    """Where each base label ends up after all handles."""
    labels = set()
    for f in cert.base.facets:
        labels.update(f)
    phi = {v: v for v in labels}
    for h in cert.handles:
        m = h.mapping()
        phi = {v: m.get(w, w) for v, w in phi.items()}
    return phi


def _lift_ridge(cert: Certificate, face) -> tuple[int, dict[int, int]]:
    phi = _composite_map(cert)
    base = cert.base.build()
    used = {to_mask(h.source) for h in cert.handles} | {to_mask(h.target) for h in cert.handles}
    target = to_mask(face)
    for r in boundary_ridges(base):
        if r in used:
            continue
        img = 0
        for v in bits(r):
            img |= 1 << phi[v]
        if img == target:
            return r, {phi[v]: v for v in bits(r)}
    raise PreconditionError(f"{tuple(face)} is not a boundary facet of the certified complex")


def union_certificate(cert_a: Certificate, cert_b: Certificate, sigma, tau,
                      pairing=None) -> tuple[Complex, Certificate]:
    """Connected union of two certified ball-class members, with a certificate.

    The union is redone on the bases first, then the handles of both sides
    run, those of ``b`` translated through the running label map.  The trace
    is finally relabeled onto the directly computed union.
    """
    from .surgery import connected_union

    if cert_a.d != cert_b.d or cert_a.kind != "ball" or cert_b.kind != "ball":
        raise PreconditionError("union_certificate needs two ball certificates of equal d")
    a, b = cert_a.replay(), cert_b.replay()
    target = connected_union(a, b, sigma, tau, pairing)
    if pairing is None:
        pairing = tuple(zip(sorted(sigma), sorted(tau)))

    rho_a, inv_a = _lift_ridge(cert_a, sigma)
    rho_b, inv_b = _lift_ridge(cert_b, tau)
    shift = 1 + max(v for f in cert_a.base.facets for v in f)
    psi0 = {inv_b[t] + shift: inv_a[s] for s, t in pairing}

    base_b = [tuple(v + shift for v in f) for f in cert_b.base.facets]
    merged = [to_mask(f) for f in cert_a.base.facets]
    merged += [to_mask(f) for f in base_b]
    base = Complex(_identify(merged, psi0))
    tree = tree_certificate(base, check=False)

    handles = list(cert_a.handles)
    mu = {}
    for f in cert_b.base.facets:
        for v in f:
            mu[v] = psi0.get(v + shift, v + shift)
    for h in cert_a.handles:
        m = h.mapping()
        mu = {v: m.get(w, w) for v, w in mu.items()}
    for h in cert_b.handles:
        pairs = tuple((mu[v], mu[w]) for v, w in h.pairing)
        step = FacetBijection(tuple(p for p, _ in pairs), tuple(q for _, q in pairs), pairs)
        handles.append(step)
        m = step.mapping()
        mu = {v: m.get(w, w) for v, w in mu.items()}
    raw = Certificate("ball", cert_a.d, tree, tuple(handles))
    got = raw.replay()
    iso = isomorphism(got, target)
    if iso is None:  # pragma: no cover - would contradict the construction
        raise AssertionError("reordered union does not match the direct union")
    return target, relabel_certificate(raw, iso)
