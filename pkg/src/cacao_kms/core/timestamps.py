"""RFC 3339 timestamp handling.

All timestamps the service emits are UTC with millisecond precision and a
"Z" suffix; inbound timestamps are normalized to that form on ingest so
version ordering compares stably.
"""

from __future__ import annotations

import re
from datetime import datetime, timedelta, timezone

_RFC3339_RE = re.compile(
    r"^(\d{4})-(\d{2})-(\d{2})[Tt]"
    r"(\d{2}):(\d{2}):(\d{2})(?:\.(\d+))?"
    r"([Zz]|[+-]\d{2}:\d{2})$"
)


def now_utc() -> str:
    return format_timestamp(datetime.now(timezone.utc))


def format_timestamp(dt: datetime) -> str:
    """``YYYY-MM-DDTHH:MM:SS.mmmZ`` in UTC."""
    dt = dt.astimezone(timezone.utc)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{dt.microsecond // 1000:03d}Z"


def parse_timestamp(value: str) -> datetime | None:
    """Parse an RFC 3339 timestamp; None when the value is not one."""
    if not isinstance(value, str):
        return None
    match = _RFC3339_RE.match(value)
    if not match:
        return None
    year, month, day, hour, minute, second = (int(g) for g in match.groups()[:6])
    fraction = match.group(7) or ""
    microsecond = int((fraction + "000000")[:6]) if fraction else 0
    offset = match.group(8)
    if offset in ("Z", "z"):
        tz = timezone.utc
    else:
        sign = 1 if offset[0] == "+" else -1
        hours, minutes = int(offset[1:3]), int(offset[4:6])
        tz = timezone(sign * timedelta(hours=hours, minutes=minutes))
    try:
        return datetime(year, month, day, hour, minute, second, microsecond, tz)
    except ValueError:
        return None


def normalize_timestamp(value: str) -> str:
    """Normalize to millisecond UTC "Z" form; unparseable values pass through
    untouched so validation can flag them."""
    parsed = parse_timestamp(value)
    if parsed is None:
        return value
    return format_timestamp(parsed)


def bump_millisecond(value: str) -> str:
    """Smallest representable timestamp strictly after ``value``."""
    parsed = parse_timestamp(value)
    if parsed is None:
        raise ValueError(f"not an RFC 3339 timestamp: {value!r}")
    return format_timestamp(parsed + timedelta(milliseconds=1))


def duration_ms(start: str, end: str) -> float | None:
    """Milliseconds between two timestamps; None if either fails to parse."""
    t0, t1 = parse_timestamp(start), parse_timestamp(end)
    if t0 is None or t1 is None:
        return None
    return (t1 - t0).total_seconds() * 1000.0
