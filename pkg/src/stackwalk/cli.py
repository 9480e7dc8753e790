"""Command-line front end.

Exit status: 0 on success, 1 on domain errors (bad files, failed
preconditions, guard refusals, failed verification, fruitless search),
2 on usage errors.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .complex import PreconditionError, f_vector, is_chordal_skeleton, is_neighborly, num_components
from .generators import (
    Certificate,
    GenerationError,
    gen_hbar_member,
    gen_stacked_ball,
    gen_stacked_sphere,
    gen_walkup_closed,
    search_neighborly_walkup,
    verify_certificate,
)
from .homology import betti, relative_betti
from .io import FormatError, dumps, format_facets, read_complex, read_json
from .linalg import F2, QQ, FieldSpec
from .recognition import Verdict, boundary_complex, classify
from .stacked import (
    is_locally_stacked,
    is_stacked_closed,
    is_stacked_sphere,
    is_stacked_with_boundary,
    kalai_criterion,
)
from .surgery import (
    FacetBijection,
    connected_union,
    handle_add_boundary,
    handle_add_closed,
    handle_delete,
)
from .tightness import DEFAULT_GUARD, GuardExceeded, criteria, is_tight, threads_from_env


class UsageError(Exception):
    pass


def _field(text: str) -> FieldSpec:
    try:
        return FieldSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _face(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated labels, got {text!r}") from None
    if not vals or any(v < 0 for v in vals) or len(set(vals)) != len(vals):
        raise argparse.ArgumentTypeError(f"bad face {text!r}")
    return vals


def _pairing(text: str) -> tuple[tuple[int, int], ...]:
    out = []
    for tok in text.split(","):
        a, sep, b = tok.partition(":")
        if not sep:
            raise argparse.ArgumentTypeError(f"pairing entries look like a:x, got {tok!r}")
        try:
            out.append((int(a), int(b)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad pairing entry {tok!r}") from None
    return tuple(out)


def _seed(text: str) -> int:
    try:
        s = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= s < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return s


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return v


# ---------------------------------------------------------------------------
# reports


def _betti_doc(c, fields) -> dict:
    out = {}
    for f in fields:
        b = betti(c, f)
        out[str(f)] = {"reduced": b.as_list(), "minus_one": b.minus_one}
    return out


def _stacked_value(c, cls) -> Optional[bool]:
    v = cls.verdict
    if v is Verdict.SPHERE:
        return is_stacked_sphere(c, cls.field, check=False) if c.dim >= 1 else None
    if v is Verdict.CLOSED_MANIFOLD:
        if c.dim >= 3 and num_components(c) == 1:
            return is_stacked_closed(c, cls.field, check=False)
        return None
    if cls.has_boundary:
        return is_stacked_with_boundary(c, cls.field, check=False)
    return None


def analyze_report(c, field: FieldSpec = F2, guard: int = DEFAULT_GUARD,
                   workers: Optional[int] = None) -> dict:
    cls = classify(c, field)
    fields = sorted({F2, QQ, field}, key=lambda f: (f.characteristic == 0, f.characteristic))
    doc = {
        "field": str(field),
        "dim": c.dim,
        "fvector": list(f_vector(c)[1:]),
        "betti": _betti_doc(c, fields),
        "manifold_class": cls.verdict.value,
        "neighborly": is_neighborly(c),
        "connected": num_components(c) == 1,
        "boundary": None,
        "stacked": None,
        "locally_stacked": None,
        "ns_lhs": None,
        "ns_rhs": None,
        "bagchi_equal": None,
        "tight": None,
        "certificate": None,
    }
    if not cls.is_manifold:
        doc["witness"] = list(cls.witness or ())
        doc["reason"] = cls.reason
        return doc
    bd = boundary_complex(c, field)
    doc["boundary"] = {"closed": bd.dim == -1, "facets": len(bd.facet_masks) if bd.dim >= 0 else 0,
                       "fvector": list(f_vector(bd)[1:])}
    doc["stacked"] = _stacked_value(c, cls)
    if c.dim >= 1:
        doc["locally_stacked"] = is_locally_stacked(c, field, check=False)
    if cls.is_closed and c.dim >= 3 and doc["connected"]:
        cr = criteria(c, field)
        doc["ns_lhs"], doc["ns_rhs"] = cr.ns_lhs, cr.ns_rhs
        doc["bagchi_equal"] = cr.bagchi_equal
        doc["tight_neighborly"] = cr.tight_neighborly
        if cr.bds_equal is not None:
            doc["bds_equal"] = cr.bds_equal
    if c.num_vertices <= guard:
        t = is_tight(c, field, guard, workers)
        doc["tight"] = t.tight
        if t.witness:
            doc["tight_witness"] = {"W": list(t.witness[0]), "degree": t.witness[1]}
    else:
        doc["tight_skipped"] = f"{c.num_vertices} vertices exceeds guard {guard}"
    return doc


# ---------------------------------------------------------------------------
# commands


def _emit_complex(c, out: Optional[str], header=()) -> Optional[str]:
    text = format_facets(c, header)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        return None
    return text


def _write_cert(cert: Certificate, path: Optional[str]) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(dumps(cert.to_json()))


def cmd_analyze(args) -> str:
    c = read_complex(args.file)
    doc = analyze_report(c, args.field, args.guard, threads_from_env())
    if args.cert:
        cert = Certificate.from_json(read_json(args.cert))
        res = verify_certificate(c, cert)
        doc["certificate"] = {"ok": res.ok, "kind": cert.kind, "k": cert.k, "seed": cert.seed,
                              "step": res.step, "reason": res.reason}
    return dumps(doc)


def cmd_homology(args) -> str:
    c = read_complex(args.file)
    if args.relative_to:
        sub = read_complex(args.relative_to)
        b = relative_betti(c, sub, args.field)
        return dumps({"field": str(args.field), "relative": True,
                      "betti": b.as_list(), "minus_one": b.minus_one})
    b = betti(c, args.field)
    return dumps({"field": str(args.field), "relative": False,
                  "betti": b.as_list(), "minus_one": b.minus_one})


def cmd_check(args) -> str:
    c = read_complex(args.file)
    f = args.field
    doc = {"check": args.check, "field": str(f)}
    if args.check == "neighborly":
        doc["result"] = is_neighborly(c)
    elif args.check == "tight":
        t = is_tight(c, f, args.guard, threads_from_env())
        doc["result"] = t.tight
        doc["subsets_checked"] = t.subsets_checked
        if t.witness:
            doc["witness"] = {"W": list(t.witness[0]), "degree": t.witness[1]}
        if t.reason:
            doc["reason"] = t.reason
    elif args.check == "kalai":
        doc["result"] = kalai_criterion(c, f)
        doc["chordal"] = is_chordal_skeleton(c)
    elif args.check == "locally-stacked":
        doc["result"] = is_locally_stacked(c, f)
    else:
        cls = classify(c, f)
        if not cls.is_manifold:
            raise PreconditionError(f"not a homology manifold over {f}: {cls.reason}")
        val = _stacked_value(c, cls)
        if val is None:
            raise PreconditionError("stackedness is only decided for balls, spheres, "
                                    "manifolds with boundary and connected closed d >= 3")
        doc["result"] = val
    return dumps(doc)


def cmd_gen(args) -> str:
    kind, d, s = args.kind, args.dim, args.seed
    if kind == "ball":
        c, cert = gen_stacked_ball(d, args.facets or 1, s)
    elif kind == "sphere":
        if args.vertices is None:
            raise UsageError("gen sphere needs --vertices")
        c, cert = gen_stacked_sphere(d, args.vertices, s)
    elif kind == "hbar":
        c, cert = gen_hbar_member(d, args.handles, args.facets or 1, s)
    else:
        c, cert = gen_walkup_closed(d, args.handles, args.facets or 1, s)
    _write_cert(cert, args.cert)
    header = [f"stackwalk gen {kind} dim={d} handles={cert.k} seed={s}"]
    return _emit_complex(c, args.out, header) or ""


def cmd_search(args) -> tuple[str, int]:
    hit = search_neighborly_walkup(args.dim, args.vertices, args.handles, args.seed, args.budget)
    if hit is None:
        args.stderr.write(f"no neighborly member found within budget {args.budget}\n")
        return dumps({"found": False, "seed": args.seed, "budget": args.budget}), 1
    c, cert = hit
    _write_cert(cert, args.cert)
    if args.out:
        _emit_complex(c, args.out, [f"stackwalk search seed={args.seed}"])
    return dumps({"found": True, "seed": args.seed, "fvector": list(f_vector(c)[1:]),
                  "facets": [list(f) for f in c.facets], "certificate": cert.to_json()}), 0


def cmd_surgery(args) -> str:
    files = args.files
    want = 2 if args.op == "union" else 1
    if len(files) != want:
        raise UsageError(f"surgery {args.op} takes {want} complex file(s)")
    if args.op != "delete" and args.tau is None:
        raise UsageError(f"surgery {args.op} needs --tau")
    c = read_complex(files[0])
    if args.op == "delete":
        cut, psi = handle_delete(c, args.sigma, args.field)
        pairs = " ".join(f"{a}:{b}" for a, b in psi.pairing)
        return _emit_complex(cut, args.out, [f"regluing {pairs}"]) or ""
    pairing = args.pairing
    if args.op == "union":
        out = connected_union(c, read_complex(files[1]), args.sigma, args.tau, pairing, args.field)
        return _emit_complex(out, args.out) or ""
    psi = (FacetBijection(args.sigma, args.tau, pairing) if pairing
           else FacetBijection.ordered(args.sigma, args.tau))
    cls = classify(c, args.field)
    if cls.is_closed:
        out = handle_add_closed(c, psi, field=args.field)
    else:
        out = handle_add_boundary(c, psi, field=args.field)
    return _emit_complex(out, args.out) or ""


def cmd_verify(args) -> tuple[str, int]:
    c = read_complex(args.file)
    cert = Certificate.from_json(read_json(args.cert))
    res = verify_certificate(c, cert)
    return dumps({"ok": res.ok, "step": res.step, "reason": res.reason,
                  "kind": cert.kind, "k": cert.k}), 0 if res.ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stackwalk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="full report on a facet file")
    a.add_argument("file")
    a.add_argument("--field", type=_field, default=F2)
    a.add_argument("--guard", type=_count, default=DEFAULT_GUARD)
    a.add_argument("--cert", help="certificate to verify against the complex")
    a.set_defaults(run=cmd_analyze)

    h = sub.add_parser("homology", help="reduced or relative Betti numbers")
    h.add_argument("file")
    h.add_argument("--field", type=_field, required=True)
    h.add_argument("--relative-to", dest="relative_to")
    h.set_defaults(run=cmd_homology)

    c = sub.add_parser("check", help="a single predicate")
    c.add_argument("file")
    g = c.add_mutually_exclusive_group(required=True)
    for name in ("stacked", "locally-stacked", "tight", "kalai", "neighborly"):
        g.add_argument(f"--{name}", dest="check", action="store_const", const=name)
    c.add_argument("--field", type=_field, default=F2)
    c.add_argument("--guard", type=_count, default=DEFAULT_GUARD)
    c.set_defaults(run=cmd_check)

    gen = sub.add_parser("gen", help="seeded generators")
    gen.add_argument("kind", choices=["ball", "sphere", "hbar", "walkup"])
    gen.add_argument("--dim", type=int, required=True)
    gen.add_argument("--facets", type=_count)
    gen.add_argument("--vertices", type=_count)
    gen.add_argument("--handles", type=_count, default=0)
    gen.add_argument("--seed", type=_seed, required=True)
    gen.add_argument("--out")
    gen.add_argument("--cert")
    gen.set_defaults(run=cmd_gen)

    s = sub.add_parser("search", help="randomized search for neighborly class members")
    s.add_argument("target", choices=["tight-neighborly"])
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--vertices", type=_count, required=True)
    s.add_argument("--handles", type=_count, required=True)
    s.add_argument("--seed", type=_seed, required=True)
    s.add_argument("--budget", type=_count, required=True)
    s.add_argument("--out")
    s.add_argument("--cert")
    s.set_defaults(run=cmd_search)

    su = sub.add_parser("surgery", help="handle addition, deletion and connected union")
    su.add_argument("op", choices=["add", "delete", "union"])
    su.add_argument("files", nargs="+")
    su.add_argument("--sigma", type=_face, required=True)
    su.add_argument("--tau", type=_face)
    su.add_argument("--pairing", type=_pairing)
    su.add_argument("--field", type=_field, default=F2)
    su.add_argument("--out")
    su.set_defaults(run=cmd_surgery)

    v = sub.add_parser("verify", help="replay a certificate against a complex")
    v.add_argument("file")
    v.add_argument("--cert", required=True)
    v.set_defaults(run=cmd_verify)
    return p


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.stderr = stderr
    try:
        res = args.run(args)
    except UsageError as exc:
        parser.print_usage(stderr)
        stderr.write(f"stackwalk: error: {exc}\n")
        return 2
    except GuardExceeded as exc:
        stderr.write(f"stackwalk: guard: {exc}\n")
        return 1
    except FormatError as exc:
        stderr.write(f"stackwalk: bad input: {exc}\n")
        return 1
    except PreconditionError as exc:
        stderr.write(f"stackwalk: precondition failed: {exc}\n")
        return 1
    except GenerationError as exc:
        stderr.write(f"stackwalk: generation failed: {exc}\n")
        return 1
    except (ValueError, OSError) as exc:
        stderr.write(f"stackwalk: error: {exc}\n")
        return 1
    code = 0
    if isinstance(res, tuple):
        res, code = res
    if res:
        stdout.write(res)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
