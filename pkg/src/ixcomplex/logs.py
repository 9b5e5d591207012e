"""Event-log ingestion and speed tables.

Logs are hierarchical timing records on four levels: session, task, page
visit, interaction step.  Only tasks and steps carry the analytics of
interest; page visits give steps their containing interval and tasks their
end-to-end duration (last page exit minus first page enter, so gaps between
pages count as task time).

File format: JSON, UTF-8, top level {"sessions": [...]} with snake_case
keys mirroring the model fields and integer millisecond timestamps.

Outlier removal uses the interquartile range method: per group, durations
outside [Q1 - 1.5*IQR, Q3 + 1.5*IQR] are dropped before speeds are
computed.  Quartiles are linearly interpolated at positions 0.25*(n-1) and
0.75*(n-1) on the sorted sample; the choice is isolated behind IqrBounds so
alternative quartile rules can be compared if ever needed.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DomainError, LogFormatError
from .rounding import format_fixed
from .speed import speed_stats


class AnalyticsWarning(UserWarning):
    """Degenerate but tolerable data: empty groups, zero durations."""


@dataclass(frozen=True)
class StepRecord:
    step_label: str
    start_ms: int
    end_ms: int
    is_count: int


@dataclass(frozen=True)
class PageVisit:
    page: str
    enter_ms: int
    exit_ms: int
    steps: tuple[StepRecord, ...] = ()


@dataclass(frozen=True)
class Task:
    task_id: str
    concept_name: str
    binding: Mapping[str, int]
    is_count: int
    page_visits: tuple[PageVisit, ...] = ()

    @property
    def start_ms(self) -> int:
        return self.page_visits[0].enter_ms

    @property
    def end_ms(self) -> int:
        return self.page_visits[-1].exit_ms

    @property
    def duration_s(self) -> float:
        return (self.end_ms - self.start_ms) / 1000.0


@dataclass(frozen=True)
class Session:
    session_id: str
    tasks: tuple[Task, ...] = ()


@dataclass(frozen=True)
class EventLog:
    sessions: tuple[Session, ...] = ()


# --- loading and dumping ---------------------------------------------------


def load_log(data: bytes | str) -> EventLog:
    """Parse and validate a log file; raises LogFormatError with the path
    to the first offending record."""
    try:
        parsed = json.loads(data)
    except json.JSONDecodeError as exc:
        raise LogFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(parsed, dict) or "sessions" not in parsed:
        raise LogFormatError('top level must be an object with a "sessions" list')
    log = EventLog(
        tuple(
            _session_from(raw, f"sessions[{i}]")
            for i, raw in enumerate(_expect_list(parsed, "sessions", ""))
        )
    )
    validate_log(log)
    return log


def dump_log(log: EventLog) -> str:
    """Deterministic JSON text; identical logs yield identical bytes."""
    return json.dumps(log_to_dict(log), indent=2, sort_keys=True) + "\n"


def log_to_dict(log: EventLog) -> dict:
    return {
        "sessions": [
            {
                "session_id": session.session_id,
                "tasks": [
                    {
                        "task_id": task.task_id,
                        "concept_name": task.concept_name,
                        "binding": dict(sorted(task.binding.items())),
                        "is_count": task.is_count,
                        "page_visits": [
                            {
                                "page": visit.page,
                                "enter_ms": visit.enter_ms,
                                "exit_ms": visit.exit_ms,
                                "steps": [
                                    {
                                        "step_label": step.step_label,
                                        "start_ms": step.start_ms,
                                        "end_ms": step.end_ms,
                                        "is_count": step.is_count,
                                    }
                                    for step in visit.steps
                                ],
                            }
                            for visit in task.page_visits
                        ],
                    }
                    for task in session.tasks
                ],
            }
            for session in log.sessions
        ]
    }


def _expect_list(data: Mapping, key: str, where: str) -> list:
    value = data.get(key)
    if not isinstance(value, list):
        raise LogFormatError(f"{key!r} must be a list", where)
    return value


def _expect_str(data: Mapping, key: str, where: str) -> str:
    value = data.get(key)
    if not isinstance(value, str):
        raise LogFormatError(f"{key!r} must be a string", where)
    return value


def _expect_int(data: Mapping, key: str, where: str, minimum: int = 0) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise LogFormatError(f"{key!r} must be an integer", where)
    if value < minimum:
        raise LogFormatError(f"{key!r} must be >= {minimum}, got {value}", where)
    return value


def _session_from(raw, where: str) -> Session:
    if not isinstance(raw, dict):
        raise LogFormatError("session must be an object", where)
    return Session(
        _expect_str(raw, "session_id", where),
        tuple(
            _task_from(t, f"{where}.tasks[{i}]")
            for i, t in enumerate(_expect_list(raw, "tasks", where))
        ),
    )


def _task_from(raw, where: str) -> Task:
    if not isinstance(raw, dict):
        raise LogFormatError("task must be an object", where)
    binding_raw = raw.get("binding", {})
    if not isinstance(binding_raw, dict):
        raise LogFormatError("'binding' must be an object", where)
    binding: dict[str, int] = {}
    for name, value in binding_raw.items():
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            raise LogFormatError(
                f"binding value for {name!r} must be a nonnegative integer", where
            )
        binding[str(name)] = value
    return Task(
        _expect_str(raw, "task_id", where),
        _expect_str(raw, "concept_name", where),
        binding,
        _expect_int(raw, "is_count", where),
        tuple(
            _visit_from(v, f"{where}.page_visits[{i}]")
            for i, v in enumerate(_expect_list(raw, "page_visits", where))
        ),
    )


def _visit_from(raw, where: str) -> PageVisit:
    if not isinstance(raw, dict):
        raise LogFormatError("page visit must be an object", where)
    return PageVisit(
        _expect_str(raw, "page", where),
        _expect_int(raw, "enter_ms", where),
        _expect_int(raw, "exit_ms", where),
        tuple(
            _record_from(s, f"{where}.steps[{i}]")
            for i, s in enumerate(_expect_list(raw, "steps", where))
        ),
    )


def _record_from(raw, where: str) -> StepRecord:
    if not isinstance(raw, dict):
        raise LogFormatError("step record must be an object", where)
    return StepRecord(
        _expect_str(raw, "step_label", where),
        _expect_int(raw, "start_ms", where),
        _expect_int(raw, "end_ms", where),
        _expect_int(raw, "is_count", where, minimum=1),
    )


def validate_log(log: EventLog) -> None:
    """Enforce interval nesting and ordering across the hierarchy."""
    for i, session in enumerate(log.sessions):
        for j, task in enumerate(session.tasks):
            task_where = f"sessions[{i}].tasks[{j}]"
            previous_exit: int | None = None
            for k, visit in enumerate(task.page_visits):
                visit_where = f"{task_where}.page_visits[{k}]"
                if visit.exit_ms < visit.enter_ms:
                    raise LogFormatError(
                        "page visit exits before it is entered", visit_where
                    )
                if previous_exit is not None and visit.enter_ms < previous_exit:
                    raise LogFormatError(
                        "page visits are not in chronological order", visit_where
                    )
                previous_exit = visit.exit_ms
                for index, step in enumerate(visit.steps):
                    step_where = f"{visit_where}.steps[{index}]"
                    if step.end_ms < step.start_ms:
                        raise LogFormatError(
                            "step ends before it starts", step_where
                        )
                    if step.start_ms < visit.enter_ms or step.end_ms > visit.exit_ms:
                        raise LogFormatError(
                            "step interval leaves its page visit", step_where
                        )


# --- outlier removal -------------------------------------------------------


@dataclass(frozen=True)
class IqrBounds:
    q1: float
    q3: float
    lower: float
    upper: float

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1


def iqr_filter(samples: Sequence[float]) -> tuple[list[float], IqrBounds]:
    """Drop samples outside [Q1 - 1.5*IQR, Q3 + 1.5*IQR]; order preserved."""
    if not samples:
        raise DomainError("cannot filter an empty sample list")
    ordered = sorted(samples)
    q1 = _interpolated_quantile(ordered, 0.25)
    q3 = _interpolated_quantile(ordered, 0.75)
    iqr = q3 - q1
    bounds = IqrBounds(q1, q3, q1 - 1.5 * iqr, q3 + 1.5 * iqr)
    retained = [s for s in samples if bounds.lower <= s <= bounds.upper]
    return retained, bounds


def _interpolated_quantile(ordered: Sequence[float], fraction: float) -> float:
    position = fraction * (len(ordered) - 1)
    low = math.floor(position)
    high = min(low + 1, len(ordered) - 1)
    weight = position - low
    return ordered[low] + weight * (ordered[high] - ordered[low])


# --- tables ----------------------------------------------------------------

TABLE_COLUMNS = (
    "group",
    "n",
    "is",
    "min_s",
    "max_s",
    "mean_s",
    "max_is_per_s",
    "min_is_per_s",
    "mean_is_per_s",
)


@dataclass(frozen=True)
class TableRow:
    group: str
    n: int
    is_count: int
    min_s: float
    max_s: float
    mean_s: float
    max_is_per_s: float
    min_is_per_s: float
    mean_is_per_s: float


def task_table(log: EventLog, group_by: str = "task_id") -> list[TableRow]:
    """Per-group task durations and speeds, outliers removed per group.

    group_by is "task_id" or "concept_name".  Tasks in a group must share
    one IS count; groups are emitted in sorted order, so the output does not
    depend on session ordering in the file.
    """
    if group_by not in ("task_id", "concept_name"):
        raise DomainError(f"group_by must be 'task_id' or 'concept_name', got {group_by!r}")
    groups: dict[str, list[tuple[int, float]]] = {}
    for session in log.sessions:
        for task in session.tasks:
            if not task.page_visits:
                warnings.warn(
                    f"task {task.task_id!r} in session {session.session_id!r} "
                    "has no page visits; skipped",
                    AnalyticsWarning,
                    stacklevel=2,
                )
                continue
            duration = task.duration_s
            if duration <= 0:
                warnings.warn(
                    f"task {task.task_id!r} in session {session.session_id!r} "
                    "has zero duration; skipped",
                    AnalyticsWarning,
                    stacklevel=2,
                )
                continue
            key = task.task_id if group_by == "task_id" else task.concept_name
            groups.setdefault(key, []).append((task.is_count, duration))
    return _rows_from_groups(groups)


def step_table(log: EventLog) -> list[TableRow]:
    """Per-step-label durations and speeds across the whole log."""
    groups: dict[str, list[tuple[int, float]]] = {}
    for session in log.sessions:
        for task in session.tasks:
            for visit in task.page_visits:
                for step in visit.steps:
                    duration = (step.end_ms - step.start_ms) / 1000.0
                    if duration <= 0:
                        warnings.warn(
                            f"step {step.step_label!r} in session "
                            f"{session.session_id!r} has zero duration; skipped",
                            AnalyticsWarning,
                            stacklevel=2,
                        )
                        continue
                    groups.setdefault(step.step_label, []).append(
                        (step.is_count, duration)
                    )
    return _rows_from_groups(groups)


def _rows_from_groups(groups: dict[str, list[tuple[int, float]]]) -> list[TableRow]:
    rows: list[TableRow] = []
    for key in sorted(groups):
        samples = groups[key]
        counts = {is_count for is_count, _ in samples}
        if len(counts) > 1:
            raise DomainError(f"group {key!r} mixes IS counts {sorted(counts)}")
        is_count = counts.pop()
        retained, _ = iqr_filter([duration for _, duration in samples])
        if not retained:
            warnings.warn(
                f"group {key!r} is empty after outlier removal; omitted",
                AnalyticsWarning,
                stacklevel=3,
            )
            continue
        stats = speed_stats([(is_count, duration) for duration in retained])
        rows.append(
            TableRow(
                group=key,
                n=stats.n,
                is_count=is_count,
                min_s=stats.min_time,
                max_s=stats.max_time,
                mean_s=stats.mean_time,
                max_is_per_s=stats.max_speed,
                min_is_per_s=stats.min_speed,
                mean_is_per_s=stats.mean_speed,
            )
        )
    return rows


# --- rendering -------------------------------------------------------------


def _row_cells(row: TableRow) -> list[str]:
    return [
        row.group,
        str(row.n),
        str(row.is_count),
        format_fixed(row.min_s),
        format_fixed(row.max_s),
        format_fixed(row.mean_s),
        format_fixed(row.max_is_per_s),
        format_fixed(row.min_is_per_s),
        format_fixed(row.mean_is_per_s),
    ]


def table_to_text(rows: Sequence[TableRow]) -> str:
    """Aligned text table with the canonical column set."""
    cells = [list(TABLE_COLUMNS)] + [_row_cells(row) for row in rows]
    widths = [max(len(line[i]) for line in cells) for i in range(len(TABLE_COLUMNS))]
    lines = []
    for line in cells:
        padded = [value.ljust(widths[i]) for i, value in enumerate(line)]
        lines.append("  ".join(padded).rstrip())
    return "\n".join(lines)


def table_to_csv(rows: Sequence[TableRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TABLE_COLUMNS)
    for row in rows:
        writer.writerow(_row_cells(row))
    return buffer.getvalue()


def table_to_dicts(rows: Sequence[TableRow]) -> list[dict]:
    return [
        {
            "group": row.group,
            "n": row.n,
            "is": row.is_count,
            "min_s": row.min_s,
            "max_s": row.max_s,
            "mean_s": row.mean_s,
            "max_is_per_s": row.max_is_per_s,
            "min_is_per_s": row.min_is_per_s,
            "mean_is_per_s": row.mean_is_per_s,
        }
        for row in rows
    ]
