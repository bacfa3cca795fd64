"""JSON report documents."""

import json
from datetime import datetime, timezone

SCHEMA_VERSION = 1
VOLATILE = ("generated_at",)


def _default(x):
    from fractions import Fraction
    import numpy as np
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (tuple, set)):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def make_report(command, config, results, passed, cache_status=None):
    from . import __version__
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": "sympconn",
        "version": __version__,
        "command": command,
        "config": config,
        "results": results,
        "pass": bool(passed),
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    if cache_status is not None:
        doc["cache"] = cache_status
    return doc


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2, default=_default, allow_nan=True)


def stable(doc):
    """The report without volatile fields, for determinism comparisons."""
    return {k: v for k, v in doc.items() if k not in VOLATILE}


def assertion(name, value, tol, ok, **extra):
    """One numeric claim together with the tolerance it was judged against."""
    return {"name": name, "value": value, "tolerance": tol, "pass": bool(ok), **extra}
