"""Angle parsing and formatting with rational multiples of pi as the
canonical form (``7pi/36``, ``-pi/12``, ``2*pi/9``)."""
from __future__ import annotations

import math
import re
from fractions import Fraction

MAX_DENOMINATOR = 720
_PI_FORM = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<num>\d+(?:\.\d+)?)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+(?:\.\d+)?))?\s*$",
    re.IGNORECASE,
)
_NAMED = {"max": math.pi / 4}


def parse_angle(text: str | float) -> float:
    """Radians from ``"7pi/36"``, ``"pi"``, ``"max"`` (pi/4) or a plain number."""
    if isinstance(text, (int, float)):
        value = float(text)
    else:
        s = text.strip().lower().replace("π", "pi")
        if s in _NAMED:
            return _NAMED[s]
        m = _PI_FORM.match(s)
        if m:
            num = float(m.group("num") or 1.0)
            den = float(m.group("den") or 1.0)
            if den == 0:
                raise ValueError(f"zero denominator in angle {text!r}")
            value = num * math.pi / den
            if m.group("sign") == "-":
                value = -value
        else:
            try:
                value = float(s)
            except ValueError:
                raise ValueError(f"cannot parse angle {text!r}; use e.g. 7pi/36, max or radians") from None
    if not math.isfinite(value):
        raise ValueError(f"angle must be finite, got {text!r}")
    return value


def format_angle(value: float, tol: float = 1e-9) -> str:
    """``7pi/36`` when ``value`` is a small rational multiple of pi, else radians."""
    frac = Fraction(value / math.pi).limit_denominator(MAX_DENOMINATOR)
    if abs(float(frac) * math.pi - value) > tol:
        return f"{value:.6f}"
    if frac == 0:
        return "0"
    num, den = frac.numerator, frac.denominator
    head = {1: "pi", -1: "-pi"}.get(num, f"{num}pi")
    return head if den == 1 else f"{head}/{den}"
