"""Synthetic tagging corpora driven by exponentially decaying interest.

Events follow an inhomogeneous Poisson process with rate
``lambda0 * x0 * exp(-m t)``, generated by thinning a homogeneous process
of rate ``lambda0 * x0``.  Randomness comes from numpy's PCG64 bit
generator; user ``i`` of a cohort with seed ``s`` draws everything from
``PCG64(SeedSequence([s, i]))``, so users can be generated in any order or
in parallel with identical results.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .decay import DecayParams, _check_m
from .ingestion import TaggingEvent
from .units import DAY, parse_instant

DEFAULT_ORIGIN = parse_instant("2024-01-01T00:00:00Z")


def make_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, key)])))


@dataclass(frozen=True)
class CohortSpec:
    """Cohort configuration; time in seconds, rates per second."""

    n_users: int = 20
    horizon: float = 150 * DAY
    lambda0: float = 10 / DAY
    x0_range: tuple[float, float] = (1.0, 5.0)
    m_range: tuple[float, float] = (0.02 / DAY, 0.1 / DAY)
    tags_per_user: int = 5
    seed: int = 0
    tag_pool: int = 0
    n_ontologies: int = 3
    object_id: str = "o1"
    origin: float = DEFAULT_ORIGIN

    def __post_init__(self):
        if self.n_users < 1:
            raise ValueError("n_users must be >= 1")
        if not self.horizon > 0:
            raise ValueError("horizon must be > 0")
        if not self.lambda0 > 0:
            raise ValueError("lambda0 must be > 0")
        if self.tags_per_user < 1:
            raise ValueError("tags_per_user must be >= 1")
        (xa, xb), (ma, mb) = self.x0_range, self.m_range
        if not (0 <= xa <= xb):
            raise ValueError(f"x0 range must satisfy 0 <= a <= b, got {xa}:{xb}")
        if not (0 < ma <= mb):
            raise ValueError(f"m range must satisfy 0 < a <= b, got {ma}:{mb}")
        if self.tag_pool and self.tag_pool < self.tags_per_user:
            raise ValueError("tag_pool must be >= tags_per_user")

    @property
    def pool_size(self) -> int:
        return self.tag_pool or 2 * self.tags_per_user


@dataclass(frozen=True)
class UserTruth:
    params: DecayParams
    tags: tuple[str, ...]


class GroundTruth(dict):
    """Mapping ``user_id -> UserTruth``."""

    def to_dict(self) -> dict:
        return {
            user: {"x0": t.params.x0, "m": t.params.m, "tags": list(t.tags)}
            for user, t in self.items()
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "GroundTruth":
        return cls(
            (user, UserTruth(DecayParams(v["x0"], v["m"]), tuple(v["tags"])))
            for user, v in data.items()
        )


def simulate_user(
    params: DecayParams,
    lambda0: float,
    horizon: float,
    tags: Sequence[str],
    rng: np.random.Generator,
    *,
    user_id: str = "u1",
    object_id: str = "o1",
    origin: float = 0.0,
    ontology_of: dict[str, str] | None = None,
) -> list[TaggingEvent]:
    """Draw one user's events on ``(0, horizon)``, offset by ``origin``."""
    if not tags:
        raise ValueError("tag vocabulary is empty")
    if not horizon > 0:
        raise ValueError("horizon must be > 0")
    if not lambda0 > 0:
        raise ValueError("lambda0 must be > 0")
    bound = lambda0 * params.x0
    n = rng.poisson(bound * horizon)
    candidates = np.sort(rng.uniform(0.0, horizon, n))
    # accept with probability rate(t) / rate(0)
    keep = rng.random(n) < np.exp(-params.m * candidates)
    times = candidates[keep & (candidates > 0.0)]
    picks = rng.integers(len(tags), size=len(times))
    ontology_of = ontology_of or {}
    return [
        TaggingEvent(origin + float(t), user_id, object_id, tags[k], ontology_of.get(tags[k], "_none"))
        for t, k in zip(times, picks)
    ]


def _user_id(i: int, n: int) -> str:
    return f"u{i + 1:0{len(str(n))}d}"


def simulate_cohort(spec: CohortSpec) -> tuple[list[TaggingEvent], GroundTruth]:
    """Generate every user independently and merge the streams by timestamp."""
    pool = [f"tag{k:03d}" for k in range(spec.pool_size)]
    ontology_of = {tag: f"ont{k % spec.n_ontologies}" for k, tag in enumerate(pool)}
    truth = GroundTruth()
    events: list[TaggingEvent] = []
    for i in range(spec.n_users):
        rng = make_rng(spec.seed, i)
        x0 = float(rng.uniform(*spec.x0_range))
        m = float(rng.uniform(*spec.m_range))
        _check_m(m)
        vocab = tuple(sorted(rng.choice(pool, size=spec.tags_per_user, replace=False).tolist()))
        user = _user_id(i, spec.n_users)
        params = DecayParams(x0, m)
        truth[user] = UserTruth(params, vocab)
        events.extend(
            simulate_user(
                params, spec.lambda0, spec.horizon, vocab, rng,
                user_id=user, object_id=spec.object_id, origin=spec.origin, ontology_of=ontology_of,
            )
        )
    events.sort(key=lambda ev: (ev.timestamp, ev.user_id))
    return events, truth
