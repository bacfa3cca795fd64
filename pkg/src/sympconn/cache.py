"""Content-addressed cache of Chevalley structure constants.

Only Chevalley algebras are cached: their sign propagation is the one costly
construction step, while matrix forms rebuild in milliseconds and need their
matrix model anyway.  Every load is re-audited (stored hash and Jacobi); a
corrupt entry is rebuilt and overwritten.
"""

import hashlib
import json
import os

from .config import ALIASES, GATED, ConfigError, build_algebra, parse_algebra
from .liecore.algebra import LieAlgebra, jacobi_audit
from .liecore.chevalley import CONVENTION_VERSION, chevalley_algebra, chevalley_table
from .rootsys import build_root_system, normalize_kind


def _digest(payload):
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def cache_key(kind, rank):
    return _digest({"kind": kind, "rank": rank, "convention_version": CONVENTION_VERSION})[:20]


def _entry_path(cache_dir, kind, rank):
    return os.path.join(cache_dir, f"{kind}{rank if len(kind) == 1 else ''}-{cache_key(kind, rank)}.json")


def _store(path, L):
    payload = L.to_json()
    doc = {"convention_version": CONVENTION_VERSION, "payload": payload, "sha256": _digest(payload)}
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(doc, fh, sort_keys=True)
    os.replace(tmp, path)


def _load(path, rs):
    """Cached algebra or None (with a reason) if the entry is unusable."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
        payload = doc["payload"]
    except (OSError, ValueError, KeyError):
        return None, "unreadable"
    if doc.get("convention_version") != CONVENTION_VERSION:
        return None, "convention mismatch"
    if doc.get("sha256") != _digest(payload):
        return None, "hash mismatch"
    try:
        bare = LieAlgebra.from_json(payload)
    except (ValueError, KeyError, TypeError):
        return None, "malformed table"
    if bare.dim != rs.rank + len(rs.roots) or not jacobi_audit(bare):
        return None, "jacobi re-audit failed"
    return chevalley_algebra(rs, table=bare.table()), "hit"


def load_algebra(spec, cache_dir=None, allow_large=False):
    """(algebra, cache status)."""
    family, params = parse_algebra(spec)
    if family != "chevalley" or cache_dir is None:
        return build_algebra(spec, allow_large), "bypass"
    kind, rank = normalize_kind(params[0])
    if kind in GATED and not allow_large:
        raise ConfigError(f"{spec} is gated; pass allow_large to build it")
    try:
        rs = build_root_system(kind, rank)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    os.makedirs(cache_dir, exist_ok=True)
    path = _entry_path(cache_dir, kind, rank)
    status = "miss"
    if os.path.exists(path):
        L, status = _load(path, rs)
        if L is not None:
            if spec in ALIASES:
                L.name = spec
            return L, status
        status = f"rebuilt ({status})"
    L = chevalley_algebra(rs, table=chevalley_table(rs))
    _store(path, L)
    if spec in ALIASES:
        L.name = spec
    return L, status
