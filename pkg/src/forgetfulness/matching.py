"""Decay-weighted tag profiles and the similarity between them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _kernels
from .decay import _check_m
from .errors import TemporalOrderError
from .ingestion import TaggingEvent
from .units import format_instant, parse_instant


@dataclass(frozen=True)
class TagProfile:
    user_id: str
    reference_time: float
    weights: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for tag, w in self.weights.items():
            if not (math.isfinite(w) and w >= 0):
                raise ValueError(f"weight for {tag!r} must be finite and >= 0, got {w!r}")

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "reference_time": format_instant(self.reference_time),
            "weights": dict(sorted(self.weights.items())),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TagProfile":
        return cls(data["user_id"], parse_instant(data["reference_time"]), dict(data["weights"]))


def build_profile(events: Iterable[TaggingEvent], user: str, m: float, at: float) -> TagProfile:
    """Sum ``exp(-m (at - t))`` over the user's events, per tag.

    Every event of the user must be at or before ``at``.
    """
    _check_m(m)
    mine = [ev for ev in events if ev.user_id == user]
    late = [ev for ev in mine if ev.timestamp > at]
    if late:
        raise TemporalOrderError(
            f"{len(late)} event(s) of user {user!r} are after the reference time {format_instant(at)}"
        )
    if not mine:
        return TagProfile(user, at, {})
    tags = sorted({ev.tag for ev in mine})
    index = {tag: i for i, tag in enumerate(tags)}
    times = np.array([ev.timestamp for ev in mine], dtype=float)
    tag_index = np.array([index[ev.tag] for ev in mine], dtype=np.int64)
    weights = _kernels.decayed_weights(times, tag_index, len(tags), float(m), float(at))
    return TagProfile(user, at, {tag: float(w) for tag, w in zip(tags, weights) if w > 0})


def similarity(p1: TagProfile, p2: TagProfile) -> float:
    """Cosine similarity of the weight vectors; 0 when either profile is empty."""
    if not p1.weights or not p2.weights:
        return 0.0
    common = sorted(p1.weights.keys() & p2.weights.keys())
    if not common:
        return 0.0
    dot = math.fsum(p1.weights[t] * p2.weights[t] for t in common)
    n1 = math.sqrt(math.fsum(w * w for w in p1.weights.values()))
    n2 = math.sqrt(math.fsum(w * w for w in p2.weights.values()))
    if n1 == 0.0 or n2 == 0.0:
        return 0.0
    return min(1.0, max(0.0, dot / (n1 * n2)))


def drift(events: Iterable[TaggingEvent], user: str, m: float, t1: float, t2: float) -> float:
    """``1 - similarity`` between the user's profiles at ``t1`` and ``t2``.

    Each profile only sees events up to its own instant.
    """
    if not t1 < t2:
        raise ValueError(f"drift needs t1 < t2, got {t1!r} >= {t2!r}")
    events = list(events)
    before = lambda t: [ev for ev in events if ev.timestamp <= t]  # noqa: E731
    return 1.0 - similarity(build_profile(before(t1), user, m, t1), build_profile(before(t2), user, m, t2))
