"""
rtw.io
======

File formats: the FamilyDocument JSON codec for copy families, red-blue
graph documents and JSON payloads of solver outcomes.

Documents are written with sorted keys, compact separators and a trailing
newline, so emit -> parse -> emit is byte-identical.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List

from rtw.enumeration import Copy, RedBlueGraph
from rtw.graphcore import SmallGraph, emit_graph6, parse_graph6
from rtw.rainbow import CopyFamily

logger = logging.getLogger(__name__)

SCHEMA = "rtw/1"


class DocumentError(ValueError):
    """A document does not describe a valid object."""


@dataclass(frozen=True)
class FamilyDocument:
    """
    Serialized CopyFamily.

    Attributes
    ----------
    n_host : int
        Host vertex count
    pattern : str
        graph6 text of the pattern
    copies : list
        One list of ``[u, v]`` pairs per copy, low vertex first
    allow_multiplicity : bool
        Whether repeated copies are distinct members
    """

    n_host: int
    pattern: str
    copies: List[List[List[int]]]
    allow_multiplicity: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA,
            "n_host": self.n_host,
            "pattern": self.pattern,
            "copies": self.copies,
            "allow_multiplicity": self.allow_multiplicity,
        }


def dumps(payload: Any) -> str:
    """Canonical JSON text: sorted keys, compact, newline-terminated."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def family_to_document(family: CopyFamily) -> FamilyDocument:
    return FamilyDocument(
        n_host=family.n_host,
        pattern=emit_graph6(family.pattern),
        copies=[[list(e) for e in c.edges] for c in family.copies],
        allow_multiplicity=family.allow_multiplicity,
    )


def family_from_document(doc: FamilyDocument) -> CopyFamily:
    """
    Rebuild and re-validate the family a document describes.

    Raises
    ------
    DocumentError
        Bad or oversized pattern, malformed edges, or a copy that is not a
        copy of the pattern
    """
    try:
        pattern = parse_graph6(doc.pattern)
    except ValueError as exc:
        raise DocumentError(f"Bad pattern: {exc}") from exc
    copies = []
    for index, edges in enumerate(doc.copies):
        if not isinstance(edges, list) or not all(
            isinstance(e, list) and len(e) == 2 for e in edges
        ):
            raise DocumentError(f"Copy {index} is not a list of vertex pairs")
        try:
            copies.append(Copy.of((int(u), int(v)) for u, v in edges))
        except (TypeError, ValueError) as exc:
            raise DocumentError(f"Copy {index}: {exc}") from exc
    try:
        family = CopyFamily(doc.n_host, pattern, tuple(copies), doc.allow_multiplicity)
        family.verify()
    except (TypeError, ValueError) as exc:
        raise DocumentError(str(exc)) from exc
    return family


def emit_document(family: CopyFamily) -> str:
    return dumps(family_to_document(family).to_dict())


def _json_object(text: str) -> Dict[str, Any]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"Not JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise DocumentError("Document must be a JSON object")
    if payload.get("schema", SCHEMA) != SCHEMA:
        raise DocumentError(f"Unsupported schema {payload.get('schema')!r}")
    return payload


def _family_from_payload(payload: Dict[str, Any]) -> CopyFamily:
    missing = [k for k in ("n_host", "pattern", "copies") if k not in payload]
    if missing:
        raise DocumentError(f"Document is missing fields: {missing}")
    if not isinstance(payload["copies"], list):
        raise DocumentError("copies must be a list")
    try:
        n_host = int(payload["n_host"])
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"n_host must be an integer: {exc}") from exc
    doc = FamilyDocument(
        n_host=n_host,
        pattern=str(payload["pattern"]),
        copies=payload["copies"],
        allow_multiplicity=bool(payload.get("allow_multiplicity", False)),
    )
    return family_from_document(doc)


def parse_document(text: str) -> CopyFamily:
    """Parse FamilyDocument JSON text into a validated CopyFamily."""
    return _family_from_payload(_json_object(text))


def parse_any(text: str) -> CopyFamily | RedBlueGraph:
    """
    Parse either a FamilyDocument or a red-blue graph document.

    A document with ``graph6`` and no ``copies`` is a red-blue graph.
    """
    payload = _json_object(text)
    if "graph6" in payload and "copies" not in payload:
        return colored_from_document(payload)
    return _family_from_payload(payload)


def load_document(filepath: str | Path) -> CopyFamily | RedBlueGraph:
    """
    Load a family or red-blue graph document.

    Examples
    --------
    >>> family = load_document("outputs/p4_n10.json")
    """
    filepath = Path(filepath)
    if not filepath.exists():
        raise FileNotFoundError(f"Document not found: {filepath}")
    document = parse_any(filepath.read_text(encoding="utf-8"))
    logger.info(f"Loaded {type(document).__name__}: {filepath}")
    return document


def save_document(
    document: CopyFamily | RedBlueGraph, filepath: str | Path, overwrite: bool = False
) -> None:
    """Write a family or red-blue graph document; refuses to overwrite unless asked."""
    filepath = Path(filepath)
    if filepath.exists() and not overwrite:
        raise FileExistsError(f"File already exists: {filepath}")

    filepath.parent.mkdir(parents=True, exist_ok=True)
    filepath.write_text(document_text(document), encoding="utf-8")
    logger.info(f"Saved {type(document).__name__}: {filepath}")


def document_text(document: CopyFamily | RedBlueGraph) -> str:
    if isinstance(document, RedBlueGraph):
        return dumps(colored_to_document(document))
    return emit_document(document)


def colored_to_document(g: RedBlueGraph) -> Dict[str, Any]:
    return {
        "schema": SCHEMA,
        "n": g.graph.n,
        "graph6": emit_graph6(g.graph),
        "red": sorted([list(e) for e in g.red]),
        "blue": sorted([list(e) for e in g.blue]),
    }


def colored_from_document(payload: Dict[str, Any]) -> RedBlueGraph:
    try:
        graph = parse_graph6(str(payload["graph6"]))
        return RedBlueGraph(graph, frozenset(tuple(e) for e in payload.get("red", [])))
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"Bad red-blue document: {exc}") from exc


def certificate_to_dict(certificate) -> Dict[str, Any]:
    if isinstance(certificate, RedBlueGraph):
        return colored_to_document(certificate)
    if isinstance(certificate, SmallGraph):
        return {
            "n": certificate.n,
            "graph6": emit_graph6(certificate),
            "edges": [list(e) for e in certificate.edges()],
        }
    return family_to_document(certificate).to_dict()


def outcome_to_dict(outcome) -> Dict[str, Any]:
    """JSON payload for a SearchOutcome."""
    return {
        "schema": SCHEMA,
        "value": outcome.value,
        "status": outcome.status.value,
        "certificate": certificate_to_dict(outcome.certificate),
        "stats": {
            "nodes": outcome.stats.nodes,
            "seconds": round(outcome.stats.seconds, 6),
            "prunes": outcome.stats.prunes,
            "cutoff": outcome.stats.cutoff,
        },
    }
