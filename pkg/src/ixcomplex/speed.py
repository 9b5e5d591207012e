"""Interaction-speed models and IS/time conversion.

An interaction speed is measured in interaction steps per second (IS/sec).
The built-in models carry the bundled reference measurements from a
movie-ticket booking task: the pooled model has a mean of 1.05 IS/sec with
observed extremes 0.18 and 8.15; the per-version models carry means only
(1.20 and 0.66), so range estimates with them are refused rather than
invented.

A group's mean speed is defined as is_count / mean_time, not as the mean of
per-sample speeds; this is the definition that keeps the table identity
mean_speed * mean_time = is_count exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError


@dataclass(frozen=True)
class SpeedModel:
    name: str
    mean: float
    min: float | None = None
    max: float | None = None
    source: str = ""

    def __post_init__(self):
        if self.mean <= 0:
            raise DomainError(f"mean speed must be positive, got {self.mean}")
        if self.min is not None and not 0 < self.min <= self.mean:
            raise DomainError(f"min speed must satisfy 0 < min <= mean, got {self.min}")
        if self.max is not None and self.max < self.mean:
            raise DomainError(f"max speed must be >= mean, got {self.max}")

    @property
    def has_range(self) -> bool:
        return self.min is not None and self.max is not None


BUILTIN_SPEED_MODELS: dict[str, SpeedModel] = {
    "overall": SpeedModel(
        "overall", 1.05, 0.18, 8.15, "all booking tasks pooled, n=912"
    ),
    "v1": SpeedModel("v1", 1.20, source="wizard version, all attempts pooled"),
    "v2": SpeedModel("v2", 0.66, source="single-page version, n=260"),
}


def get_speed_model(name: str) -> SpeedModel:
    model = BUILTIN_SPEED_MODELS.get(name)
    if model is None:
        raise DomainError(
            f"unknown speed model {name!r}; built-ins: {sorted(BUILTIN_SPEED_MODELS)}"
        )
    return model


@dataclass(frozen=True)
class TimeEstimate:
    """Expected/fastest/slowest seconds; the range is None for mean-only
    models rather than a fabricated value."""

    expected: float
    fastest: float | None
    slowest: float | None


def estimate_time(is_count: int, model: SpeedModel) -> TimeEstimate:
    """Translate an IS count into seconds by dividing by model speeds."""
    if is_count < 0:
        raise DomainError(f"IS count cannot be negative, got {is_count}")
    if is_count == 0:
        return TimeEstimate(0.0, 0.0, 0.0)
    return TimeEstimate(
        expected=is_count / model.mean,
        fastest=is_count / model.max if model.max is not None else None,
        slowest=is_count / model.min if model.min is not None else None,
    )


@dataclass(frozen=True)
class SpeedStats:
    is_count: int
    n: int
    mean_time: float
    min_time: float
    max_time: float
    mean_speed: float
    max_speed: float
    min_speed: float


def speed_stats(samples: Sequence[tuple[int, float]]) -> SpeedStats:
    """Duration statistics and derived speeds for one task or step group.

    All samples must share one IS count and have positive durations; the
    fastest duration gives the max speed and vice versa.
    """
    if not samples:
        raise DomainError("cannot compute speeds from an empty sample list")
    counts = {is_count for is_count, _ in samples}
    if len(counts) > 1:
        raise DomainError(f"samples mix IS counts: {sorted(counts)}")
    is_count = counts.pop()
    if is_count < 0:
        raise DomainError(f"IS count cannot be negative, got {is_count}")
    durations = [duration for _, duration in samples]
    if min(durations) <= 0:
        raise DomainError("durations must be positive")
    mean_time = sum(durations) / len(durations)
    min_time = min(durations)
    max_time = max(durations)
    return SpeedStats(
        is_count=is_count,
        n=len(durations),
        mean_time=mean_time,
        min_time=min_time,
        max_time=max_time,
        mean_speed=is_count / mean_time,
        max_speed=is_count / min_time,
        min_speed=is_count / max_time,
    )


def aggregate_speed(rows: Sequence[tuple[int, float]]) -> float:
    """Sample-count-weighted mean of per-row mean speeds."""
    if not rows:
        raise DomainError("cannot aggregate an empty row list")
    total_n = 0
    weighted = 0.0
    for n, mean_speed in rows:
        if n <= 0:
            raise DomainError(f"row sample count must be positive, got {n}")
        total_n += n
        weighted += n * mean_speed
    return weighted / total_n
