"""Time handling.

Instants are POSIX seconds (float, UTC) and durations are float seconds.
Text forms: durations ``90``, ``36h``, ``3d``, ``2w``; rates ``0.05`` (per
second) or ``0.05/d``; instants ISO-8601 with an explicit offset or ``Z``.
"""

from __future__ import annotations

import re
from datetime import datetime, timezone

SECOND = 1.0
HOUR = 3600.0
DAY = 86400.0
WEEK = 7 * DAY

_UNITS = {
    "s": SECOND, "sec": SECOND, "second": SECOND,
    "h": HOUR, "hour": HOUR,
    "d": DAY, "day": DAY,
    "w": WEEK, "week": WEEK,
}

_DURATION_RE = re.compile(r"^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*([a-z]*)\s*$")


def _unit_seconds(unit: str) -> float:
    key = unit.lower()
    if key not in _UNITS and key.endswith("s") and key[:-1] in _UNITS:
        key = key[:-1]
    try:
        return _UNITS[key]
    except KeyError:
        raise ValueError(f"unknown time unit {unit!r}") from None


def parse_duration(text: str) -> float:
    """Parse ``<number>[s|h|d|w]`` into seconds. Bare numbers are seconds."""
    match = _DURATION_RE.match(str(text))
    if match is None:
        raise ValueError(f"invalid duration {text!r}")
    value, unit = match.groups()
    return float(value) * (_unit_seconds(unit) if unit else SECOND)


def parse_rate(text: str) -> float:
    """Parse ``<number>[/<unit>]`` into a per-second rate.

    Negative values are passed through so that callers can report the
    constraint violation themselves.
    """
    text = str(text).strip()
    value, _, unit = text.partition("/")
    try:
        number = float(value)
    except ValueError:
        raise ValueError(f"invalid rate {text!r}") from None
    return number / _unit_seconds(unit.strip()) if unit else number


def parse_instant(text: str) -> float:
    """Parse an ISO-8601 timestamp carrying a UTC offset into POSIX seconds."""
    text = str(text).strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        raise ValueError("timestamp has no timezone")
    return dt.timestamp()


def format_instant(seconds: float) -> str:
    dt = datetime.fromtimestamp(seconds, tz=timezone.utc)
    body = dt.strftime("%Y-%m-%dT%H:%M:%S")
    if dt.microsecond:
        body += f".{dt.microsecond:06d}"
    return body + "Z"


def to_days(seconds: float) -> float:
    return seconds / DAY


def to_weeks(seconds: float) -> float:
    return seconds / WEEK
