"""Canonical serialization helpers.

Two structurally equal values must serialize to identical bytes, so every
file and every JSON report goes through canonical_json_bytes: sorted keys,
two-space indent, UTF-8, trailing newline. Exact rationals are rendered as
fraction strings and as fixed-width decimals rounded half-to-even, which
keeps floats out of persisted documents entirely.
"""

from __future__ import annotations

from fractions import Fraction
import json


def canonical_json_bytes(document: object) -> bytes:
    text = json.dumps(document, sort_keys=True, ensure_ascii=False,
                      indent=2, separators=(",", ": "))
    return (text + "\n").encode("utf-8")


def parse_fraction(text: str | int) -> Fraction:
    """Parse "0.95", "19/20", or an int into an exact rational."""
    if isinstance(text, bool):
        raise ValueError(f"expected a number, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise ValueError(
            f"refusing float {text!r}; use a decimal or fraction string for exactness")
    return Fraction(str(text).strip())


def render_decimal(value: Fraction, places: int = 4) -> str:
    """Fixed-point decimal, rounded half-to-even. Presentation only."""
    sign = "-" if value < 0 else ""
    magnitude = -value if value < 0 else value
    scale = 10 ** places
    scaled = magnitude * scale
    whole, remainder = divmod(scaled.numerator, scaled.denominator)
    double = 2 * remainder
    if double > scaled.denominator or (double == scaled.denominator and whole % 2 == 1):
        whole += 1
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole // scale}.{whole % scale:0{places}d}"
