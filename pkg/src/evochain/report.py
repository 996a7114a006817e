"""Canonical JSON rendering for CLI reports.

The standard json module offers no control over float formatting; report
determinism (identical argv -> byte-identical output) needs every float
printed the same way on every run, so this tiny writer pins floats to 17
significant digits and leaves key order exactly as the report dict was
built.
"""

from __future__ import annotations

import numpy as np

_ESCAPES = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _string(s: str) -> str:
    out = []
    for ch in s:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return '"' + "".join(out) + '"'


def _number(x: float) -> str:
    if not np.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x}")
    return f"{x:.17g}"


def _render(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _number(float(obj))
    if isinstance(obj, str):
        return _string(obj)
    if isinstance(obj, np.ndarray):
        return _render(obj.tolist())
    if isinstance(obj, dict):
        items = ", ".join(f"{_string(str(k))}: {_render(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_render(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__} to report JSON")


def dumps(obj) -> str:
    return _render(obj)


def render_text(obj, indent: int = 0) -> str:
    """Plain-text rendering of the same report structure."""
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list, tuple, np.ndarray)):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar_text(v)}")
        return "\n".join(lines)
    if isinstance(obj, np.ndarray):
        return render_text(obj.tolist(), indent)
    if isinstance(obj, (list, tuple)):
        return "\n".join(f"{pad}- {_scalar_text(v) if not isinstance(v, (dict, list, tuple)) else render_text(v, indent + 1).lstrip()}" for v in obj)
    return f"{pad}{_scalar_text(obj)}"


def _scalar_text(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return _number(float(v))
    return str(v)
