"""JSON documents for lattices, semilattices, bi-ideals and congruences."""
from __future__ import annotations

import json
from pathlib import Path

from .errors import DocumentError
from .order import FinLattice, as_lattice, build_poset, catalog
from .semilattice import FinJoinSemilattice, semilattice_from_poset

LATTICE_FIELDS = {"name", "elements", "covers"}
SEMILATTICE_FIELDS = {"kind", "name", "elements", "covers"}


def _json_label(x):
    return x if isinstance(x, (str, int)) and not isinstance(x, bool) else str(x)


def _covers(labels, leq_cover_pairs):
    return [[_json_label(labels[i]), _json_label(labels[j])] for i, j in sorted(leq_cover_pairs)]


def lattice_to_doc(L: FinLattice, name: str = "") -> dict:
    return {
        "name": name,
        "elements": [_json_label(x) for x in L.labels],
        "covers": _covers(L.labels, L.poset.cover_pairs()),
    }


def semilattice_to_doc(S: FinJoinSemilattice, name: str = "") -> dict:
    p = S.as_poset()
    doc = {"kind": "semilattice", "elements": [_json_label(x) for x in S.labels],
           "covers": _covers(S.labels, p.cover_pairs())}
    if name:
        doc["name"] = name
    return doc


def _validate_lists(doc: dict):
    elements, covers = doc.get("elements"), doc.get("covers")
    if not isinstance(elements, list) or not isinstance(covers, list):
        raise DocumentError("'elements' and 'covers' must be lists")
    for e in elements:
        if not isinstance(e, (str, int)) or isinstance(e, bool):
            raise DocumentError(f"element labels must be strings or integers, got {e!r}")
    for c in covers:
        if not (isinstance(c, list) and len(c) == 2):
            raise DocumentError(f"each cover must be a two-element list, got {c!r}")
    return elements, [tuple(c) for c in covers]


def lattice_from_doc(doc: dict) -> FinLattice:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    if doc.get("kind") == "semilattice":
        S = semilattice_from_doc(doc)
        p = S.as_poset()
        return as_lattice(p)
    unknown = set(doc) - LATTICE_FIELDS
    if unknown:
        raise DocumentError(f"unknown fields: {sorted(unknown)}")
    if "elements" not in doc or "covers" not in doc:
        raise DocumentError("lattice document needs 'elements' and 'covers'")
    elements, covers = _validate_lists(doc)
    return as_lattice(build_poset(elements, covers))


def semilattice_from_doc(doc: dict) -> FinJoinSemilattice:
    unknown = set(doc) - SEMILATTICE_FIELDS
    if unknown:
        raise DocumentError(f"unknown fields: {sorted(unknown)}")
    if doc.get("kind") != "semilattice":
        raise DocumentError("semilattice document needs \"kind\": \"semilattice\"")
    elements, covers = _validate_lists(doc)
    return semilattice_from_poset(build_poset(elements, covers))


def load_lattice(spec: str) -> tuple[str, FinLattice]:
    """'@name' selects a catalog lattice; anything else is a JSON file path."""
    if spec.startswith("@"):
        return spec[1:], catalog(spec[1:])
    path = Path(spec)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {spec}: {exc.strerror or exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{spec}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    L = lattice_from_doc(doc)
    name = doc.get("name") or path.stem
    return name, L


def biideal_to_doc(T, i: int) -> dict:
    from .tensor import minimal_cap

    I = T.element(i)
    return {"rows": I.rows(), "cap": minimal_cap(I).labelled(T.A, T.B)}


def congruence_to_doc(labels, block_of) -> list[list]:
    from .congruence import blocks_of

    return [[_json_label(labels[x]) for x in blk] for blk in blocks_of(block_of)]


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
