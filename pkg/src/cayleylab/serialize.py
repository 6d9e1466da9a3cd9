"""JSON / CSV / text output for reports, profiles and scaling tables."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, is_dataclass
from fractions import Fraction

from .cayley import BallProfile, PowerProfile
from .verifier import ClaimReport, ScalingRow

TOOL_VERSION = "0.1.0"
_SAFE_INT = 2 ** 53


def _value(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x if -_SAFE_INT <= x <= _SAFE_INT else str(x)
    if isinstance(x, Fraction):
        return _value(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        if math.isinf(x):
            return "INFINITE"
        return None if math.isnan(x) else x
    if isinstance(x, (list, tuple)):
        return [_value(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _value(v) for k, v in x.items()}
    if hasattr(x, "item"):  # numpy scalar
        return _value(x.item())
    return str(x)


def report_dict(r: ClaimReport) -> dict:
    return {"tool-version": TOOL_VERSION, "claim": r.claim, "instance": r.instance,
            "pass": r.passed, "witnesses": _value(r.witnesses), "notes": r.notes}


def to_jsonable(obj):
    if isinstance(obj, ClaimReport):
        return report_dict(obj)
    if isinstance(obj, BallProfile):
        return {"tool-version": TOOL_VERSION, "sizes": _value(obj.sizes),
                "generates": obj.generates, "diameter": _value(obj.diameter)}
    if isinstance(obj, PowerProfile):
        return {"tool-version": TOOL_VERSION, "sizes": _value(obj.sizes), "cap-hit": obj.cap_hit}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if is_dataclass(obj):
        return _value(asdict(obj))
    return _value(obj)


def scaling_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["param", "order", "diameter", "log_order", "fit_exponent"])
    for r in rows:
        writer.writerow([r.parameter, r.group_order, r.diameter,
                         f"{r.log_order:.12g}", f"{r.fit_exponent:.12g}"])
    return buf.getvalue()


def _text(obj) -> str:
    if isinstance(obj, ClaimReport):
        wit = ", ".join(f"{k}={_value(v)}" for k, v in obj.witnesses.items())
        line = f"{'PASS' if obj.passed else 'FAIL'} {obj.claim} {obj.instance}: {wit}"
        return line + (f"  # {obj.notes}" if obj.notes else "")
    if isinstance(obj, (list, tuple)):
        return "\n".join(_text(x) for x in obj)
    if isinstance(obj, BallProfile):
        return f"ball sizes {list(obj.sizes)} diameter {_value(obj.diameter)}"
    if isinstance(obj, PowerProfile):
        return f"power sizes {list(obj.sizes)}" + (" (cap hit)" if obj.cap_hit else "")
    return str(obj)


def serialize(obj, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(to_jsonable(obj), sort_keys=True, indent=1) + "\n").encode()
    if fmt == "csv":
        if not (isinstance(obj, (list, tuple)) and all(isinstance(r, ScalingRow) for r in obj)):
            raise ValueError("csv output is only defined for scaling tables")
        return scaling_csv(obj).encode()
    if fmt == "text":
        if isinstance(obj, (list, tuple)) and obj and isinstance(obj[0], ScalingRow):
            return scaling_csv(obj).encode()
        return (_text(obj) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")
