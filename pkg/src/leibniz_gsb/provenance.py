from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from .models import Report


def jsonable(obj: Any) -> Any:
    """Rationals become ``"p/q"`` strings; tuples and arrays become lists."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def canonical_json(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def inputs_digest(payload: Any) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def render_report(report: Report) -> str:
    return json.dumps(jsonable(report.model_dump()), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit_report(report: Report, path: Optional[Union[str, Path]] = None) -> str:
    """Write the report as sorted-key JSON; without a path the text is only returned."""
    text = render_report(report)
    if path is not None:
        path = Path(path)
        try:
            path.write_text(text, encoding="utf-8")
        except OSError as e:
            raise OSError(f"cannot write report to {path}: {e.strerror or e}") from e
    return text
