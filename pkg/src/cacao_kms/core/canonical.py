"""JSON Canonicalization Scheme (RFC 8785) serializer.

Structurally equal JSON values always serialize to identical bytes: object
keys sorted by UTF-16 code units, no insignificant whitespace, numbers in
ECMAScript shortest-form notation, UTF-8 output. This is the byte form that
signatures and version comparisons are computed over.
"""

from __future__ import annotations

import json
import math
from decimal import Decimal
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from cacao_kms.core.model import Playbook

# Integers within +-2^53 serialize from their exact decimal digits; beyond
# that they are coerced through the IEEE double model JCS mandates.
_MAX_SAFE_INT = 2**53


def canonicalize(playbook: "Playbook") -> bytes:
    """Canonical byte form of a playbook, unknown properties included."""
    return canonical_bytes(playbook.raw)


def canonical_bytes(value: Any) -> bytes:
    return canonical_str(value).encode("utf-8")


def canonical_str(value: Any) -> str:
    return _encode(value)


def _encode(value: Any) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, str):
        # json.dumps matches the JSON.stringify escape rules used by JCS:
        # two-char escapes for the usual controls, \u00xx for the rest,
        # everything else emitted literally.
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, int):
        return _format_int(value)
    if isinstance(value, float):
        return _format_float(value)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_encode(item) for item in value) + "]"
    if isinstance(value, dict):
        return _encode_object(value)
    raise TypeError(f"cannot canonicalize value of type {type(value).__name__}")


def _encode_object(obj: dict) -> str:
    for key in obj:
        if not isinstance(key, str):
            raise TypeError(f"object keys must be strings, got {type(key).__name__}")
    # Sort order is defined over UTF-16 code units, not code points; encoding
    # to UTF-16BE makes astral-plane keys compare via their surrogate pairs.
    keys = sorted(obj, key=lambda k: k.encode("utf-16-be"))
    parts = (json.dumps(k, ensure_ascii=False) + ":" + _encode(obj[k]) for k in keys)
    return "{" + ",".join(parts) + "}"


def _format_int(value: int) -> str:
    if abs(value) <= _MAX_SAFE_INT:
        return str(value)
    # JCS models every number as an IEEE double, so larger integers go
    # through the double path exactly as an ECMAScript JSON.parse would
    # read them (shortest-form output can reparse to such ints, e.g. 1e20).
    try:
        as_float = float(value)
    except OverflowError as exc:
        raise ValueError(f"integer {value} has no double representation") from exc
    return _format_float(as_float)


def _format_float(value: float) -> str:
    """Shortest-form double serialization per ECMAScript Number::toString."""
    if math.isnan(value) or math.isinf(value):
        raise ValueError("NaN and Infinity are not valid JSON numbers")
    if value == 0.0:
        return "0"
    if value < 0:
        return "-" + _format_float(-value)

    # repr() already yields the shortest digit string that round-trips; the
    # remaining work is re-laying it out by the ECMAScript rules.
    _, digit_tuple, exponent = Decimal(repr(value)).as_tuple()
    digits = "".join(map(str, digit_tuple))
    stripped = digits.rstrip("0")
    exponent += len(digits) - len(stripped)
    digits = stripped

    k = len(digits)
    n = exponent + k  # value == 0.<digits> * 10^n
    if k <= n <= 21:
        return digits + "0" * (n - k)
    if 0 < n <= 21:
        return digits[:n] + "." + digits[n:]
    if -6 < n <= 0:
        return "0." + "0" * (-n) + digits
    mantissa = digits[0] + ("." + digits[1:] if k > 1 else "")
    sign = "+" if n - 1 >= 0 else "-"
    return mantissa + "e" + sign + str(abs(n - 1))
