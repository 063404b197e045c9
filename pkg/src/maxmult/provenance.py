"""Canonical JSON and content fingerprints for reports and configs."""

from __future__ import annotations

import hashlib
import json
import math

import numpy as np

__all__ = ["canonical", "canonical_json", "fingerprint"]


def canonical(obj):
    """Convert ``obj`` into plain JSON types (complex -> [re, im], tuples -> lists)."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return canonical(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [canonical(obj.real), canonical(obj.imag)]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    return repr(obj)


def canonical_json(obj) -> str:
    return json.dumps(canonical(obj), sort_keys=True, separators=(",", ":"))


def fingerprint(obj) -> str:
    """SHA-256 of the canonical JSON encoding of ``obj``."""
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()
