"""Structured document I/O: JSON-compatible text with exact numbers.

Exact values travel as strings ("3/4", "-2"); canonicalization sorts
keys and normalizes rational numerals so content hashing is stable
across producers.
"""

from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class DocumentError(ValueError):
    pass


def load_document(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise DocumentError(f"document not found: {path}")
    except json.JSONDecodeError as err:
        raise DocumentError(f"malformed document {path}: {err}")


def dump_document(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def normalize(obj):
    """Canonical form: dict keys sorted (by json), rational strings reduced."""
    if isinstance(obj, dict):
        return {k: normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, str) and _RATIONAL.match(obj):
        return str(Fraction(obj))
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        raise DocumentError("floating point values are not allowed in documents")
    return obj


def canonical_bytes(obj):
    return json.dumps(normalize(obj), sort_keys=True,
                      separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def content_hash(obj, version=""):
    h = hashlib.sha256()
    h.update(version.encode("utf-8"))
    h.update(b"\0")
    h.update(canonical_bytes(obj))
    return h.hexdigest()
