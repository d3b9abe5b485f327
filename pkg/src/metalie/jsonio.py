"""Versioned JSON envelopes for presentations, certificates and reports."""
from __future__ import annotations

import json
from typing import Any, Dict

from .errors import MetalieError

SCHEMA = 1


def envelope(kind: str, payload: Dict[str, Any]) -> Dict[str, Any]:
    return {"schema": SCHEMA, "kind": kind, **payload}


def open_envelope(doc: Dict[str, Any], kind: str) -> Dict[str, Any]:
    if doc.get("schema") != SCHEMA:
        raise MetalieError(f"unsupported schema {doc.get('schema')!r}")
    if doc.get("kind") != kind:
        raise MetalieError(f"expected a {kind!r} document, got {doc.get('kind')!r}")
    return doc


def dumps(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def loads(text: str) -> Dict[str, Any]:
    return json.loads(text)
