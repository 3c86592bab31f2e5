"""Tagging-event logs: parsing, serialization, binning and retag intervals."""

from __future__ import annotations

import csv
import io
import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import _kernels
from .errors import CorpusRejected
from .units import format_instant, parse_instant

UNASSIGNED = "_none"
FIELDS = ("timestamp", "user_id", "object_id", "tag", "ontology_id")
ANY_SCOPE = "*"


@dataclass(frozen=True, slots=True)
class TaggingEvent:
    timestamp: float
    user_id: str
    object_id: str
    tag: str
    ontology_id: str = UNASSIGNED

    def __post_init__(self):
        tag = self.tag.strip()
        if not tag:
            raise ValueError("empty tag")
        object.__setattr__(self, "tag", tag)
        if not self.ontology_id:
            object.__setattr__(self, "ontology_id", UNASSIGNED)


@dataclass(frozen=True, slots=True)
class Diagnostic:
    line: int
    reason: str

    def __str__(self):
        return f"line {self.line}: {self.reason}"


@dataclass(frozen=True)
class UsageSeries:
    """Event counts per bin for one ``(user_id, scope)``.

    ``times`` are bin midpoints (POSIX seconds) and ``origin`` is the instant
    treated as ``t = 0`` by the estimators, normally the span start.
    """

    owner: tuple[str, str]
    bin_width: float
    times: np.ndarray
    counts: np.ndarray
    origin: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "times", np.asarray(self.times, dtype=float))
        object.__setattr__(self, "counts", np.asarray(self.counts))
        if self.times.shape != self.counts.shape or self.times.ndim != 1:
            raise ValueError("times and counts must be 1-D arrays of equal length")

    def __len__(self):
        return len(self.times)

    @property
    def elapsed(self) -> np.ndarray:
        return self.times - self.origin

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.counts.tolist()))


@dataclass(frozen=True, slots=True)
class RetagInterval:
    user_id: str
    object_id: str
    gap: float
    end: float = field(default=0.0, compare=False)


# --- parsing -----------------------------------------------------------------


def _event_from_fields(values: Sequence[str]) -> TaggingEvent:
    if len(values) not in (4, 5):
        raise ValueError(f"expected 4 or 5 fields, got {len(values)}")
    ts, user, obj, tag = values[:4]
    onto = values[4] if len(values) == 5 else ""
    if not user or not obj:
        raise ValueError("empty user_id or object_id")
    return TaggingEvent(parse_instant(ts), user, obj, tag, onto or UNASSIGNED)


def _event_from_json(line: str) -> TaggingEvent:
    obj = json.loads(line)
    if not isinstance(obj, dict):
        raise ValueError("not a JSON object")
    missing = [k for k in FIELDS[:4] if k not in obj]
    if missing:
        raise ValueError(f"missing field(s) {', '.join(missing)}")
    values = [obj[k] for k in FIELDS[:4]] + [obj.get("ontology_id") or ""]
    if not all(isinstance(v, str) for v in values):
        raise ValueError("fields must be strings")
    return _event_from_fields(values)


def parse_events(
    stream: TextIO | Iterable[str], format: str = "csv"
) -> tuple[list[TaggingEvent], list[Diagnostic]]:
    """Parse a CSV or JSONL event log.

    Malformed lines are skipped and reported; blank lines are ignored.  An
    optional CSV header row is recognised by its first column name.
    Raises CorpusRejected when more than half of the data lines are bad.
    """
    if format not in ("csv", "jsonl"):
        raise ValueError(f"unknown format {format!r}")
    events: list[TaggingEvent] = []
    diagnostics: list[Diagnostic] = []
    n_lines = 0
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            if format == "jsonl":
                n_lines += 1
                events.append(_event_from_json(line))
            else:
                row = next(csv.reader([line]))
                if lineno == 1 and row and row[0].strip().lower() == "timestamp":
                    continue
                n_lines += 1
                events.append(_event_from_fields([v.strip() for v in row]))
        except (ValueError, TypeError, csv.Error) as exc:
            diagnostics.append(Diagnostic(lineno, str(exc) or type(exc).__name__))
    if n_lines and len(diagnostics) * 2 > n_lines:
        raise CorpusRejected(
            f"{len(diagnostics)} of {n_lines} lines are malformed; is the format really {format}?"
        )
    return events, diagnostics


def read_events(path: str, format: str | None = None) -> tuple[list[TaggingEvent], list[Diagnostic]]:
    format = format or ("jsonl" if str(path).endswith((".jsonl", ".ndjson")) else "csv")
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_events(fh, format)


def write_events(events: Iterable[TaggingEvent], stream: TextIO, format: str = "csv") -> None:
    if format == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(FIELDS)
        for ev in events:
            writer.writerow([format_instant(ev.timestamp), ev.user_id, ev.object_id, ev.tag, ev.ontology_id])
    elif format == "jsonl":
        for ev in events:
            record = dict(zip(FIELDS, (format_instant(ev.timestamp), ev.user_id, ev.object_id, ev.tag, ev.ontology_id)))
            stream.write(json.dumps(record) + "\n")
    else:
        raise ValueError(f"unknown format {format!r}")


def dumps_events(events: Iterable[TaggingEvent], format: str = "csv") -> str:
    buf = io.StringIO()
    write_events(events, buf, format)
    return buf.getvalue()


# --- binning -----------------------------------------------------------------


def scope_matcher(scope: str):
    """Return a predicate for a scope string.

    ``*`` matches everything, ``ontology:<id>`` matches an ontology,
    ``tag:<name>`` or a bare name matches a tag.
    """
    if scope == ANY_SCOPE:
        return lambda ev: True
    if scope.startswith("ontology:"):
        onto = scope[len("ontology:"):]
        return lambda ev: ev.ontology_id == onto
    tag = scope[len("tag:"):] if scope.startswith("tag:") else scope
    return lambda ev: ev.tag == tag


def bin_usage(
    events: Iterable[TaggingEvent],
    user: str,
    scope: str,
    bin_width: float,
    span: tuple[float, float],
) -> UsageSeries:
    """Count one user's in-scope events in bins ``[start + k w, start + (k+1) w)``.

    The last bin is cut off at the span end when the span is not a whole
    number of bins; events at or after ``end`` are dropped.
    """
    start, end = span
    if not end > start:
        raise ValueError(f"span end must be after start, got [{start}, {end}]")
    if not bin_width > 0:
        raise ValueError(f"bin width must be > 0, got {bin_width!r}")
    match = scope_matcher(scope)
    times = np.array(
        [ev.timestamp for ev in events if ev.user_id == user and match(ev) and start <= ev.timestamp < end],
        dtype=float,
    )
    n_bins = max(1, int(np.ceil((end - start) / bin_width - 1e-9)))
    counts = _kernels.bin_counts(times, float(start), float(bin_width), n_bins)
    mids = start + (np.arange(n_bins) + 0.5) * bin_width
    return UsageSeries((user, scope), float(bin_width), mids, counts, origin=float(start))


# --- retag intervals ---------------------------------------------------------


def retag_intervals(events: Iterable[TaggingEvent]) -> list[RetagInterval]:
    """Gaps between successive differing tag sets per ``(user, object)``.

    Events sharing a timestamp form one snapshot; consecutive identical
    snapshots emit nothing.  Output is sorted by user, then time, then object.
    """
    snapshots: dict[tuple[str, str], dict[float, set[str]]] = defaultdict(lambda: defaultdict(set))
    for ev in events:
        snapshots[(ev.user_id, ev.object_id)][ev.timestamp].add(ev.tag)
    out = []
    for (user, obj), by_time in snapshots.items():
        ordered = sorted(by_time.items())
        for (t_prev, tags_prev), (t_cur, tags_cur) in zip(ordered, ordered[1:]):
            if tags_cur != tags_prev:
                out.append(RetagInterval(user, obj, t_cur - t_prev, t_cur))
    out.sort(key=lambda r: (r.user_id, r.end, r.object_id))
    return out
