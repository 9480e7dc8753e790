"""Facet-list files and JSON documents."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, TextIO

from .complex import Complex, from_facets

SCHEMA_VERSION = 1


class FormatError(ValueError):
    pass


def parse_facets(text: str, source: str = "<input>") -> Complex:
    """One facet per line, whitespace-separated labels; ``#`` starts a comment."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            row = [int(tok) for tok in body.replace(",", " ").split()]
        except ValueError:
            raise FormatError(f"{source}:{lineno}: expected integers, got {body!r}") from None
        if any(v < 0 for v in row):
            raise FormatError(f"{source}:{lineno}: vertex labels must be non-negative")
        if len(set(row)) != len(row):
            raise FormatError(f"{source}:{lineno}: repeated label in facet")
        rows.append(row)
    if not rows:
        raise FormatError(f"{source}: no facets")
    return from_facets(rows)


def read_complex(path: str | Path) -> Complex:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {p}: {exc.strerror}") from None
    return parse_facets(text, str(p))


def format_facets(c: Complex, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines += [" ".join(map(str, f)) for f in c.facets]
    return "\n".join(lines) + "\n"


def write_complex(c: Complex, dest: str | Path | TextIO, header: Iterable[str] = ()) -> None:
    text = format_facets(c, header)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)


def dumps(doc: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **doc}, sort_keys=True, indent=2) + "\n"


def read_json(path: str | Path) -> dict:
    p = Path(path)
    try:
        doc = json.loads(p.read_text())
    except OSError as exc:
        raise FormatError(f"cannot read {p}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{p}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(doc, dict):
        raise FormatError(f"{p}: expected a JSON object")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise FormatError(f"{p}: unsupported schema_version {version}")
    return doc
