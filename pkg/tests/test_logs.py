import json

import pytest

from ixcomplex.errors import DomainError, LogFormatError
from ixcomplex.logs import (
    AnalyticsWarning,
    EventLog,
    PageVisit,
    Session,
    StepRecord,
    TABLE_COLUMNS,
    Task,
    dump_log,
    iqr_filter,
    load_log,
    step_table,
    table_to_csv,
    table_to_text,
    task_table,
)

MINIMAL = {
    "sessions": [
        {
            "session_id": "s0",
            "tasks": [
                {
                    "task_id": "t0",
                    "concept_name": "demo",
                    "binding": {"m": 3},
                    "is_count": 7,
                    "page_visits": [
                        {
                            "page": "p0",
                            "enter_ms": 0,
                            "exit_ms": 7000,
                            "steps": [
                                {
                                    "step_label": "pick",
                                    "start_ms": 0,
                                    "end_ms": 7000,
                                    "is_count": 7,
                                }
                            ],
                        }
                    ],
                }
            ],
        }
    ]
}


def make_log(durations_s, is_count=10, task_id="t", label="step"):
    """One session per duration, one task each, one page visit and step."""
    sessions = []
    for i, duration in enumerate(durations_s):
        ms = round(duration * 1000)
        record = StepRecord(label, 0, ms, is_count)
        visit = PageVisit(label, 0, ms, (record,))
        task = Task(task_id, "demo", {}, is_count, (visit,))
        sessions.append(Session(f"s{i}", (task,)))
    return EventLog(tuple(sessions))


class TestLoad:
    def test_minimal(self):
        log = load_log(json.dumps(MINIMAL))
        assert len(log.sessions) == 1
        step = log.sessions[0].tasks[0].page_visits[0].steps[0]
        assert step == StepRecord("pick", 0, 7000, 7)

    def test_accepts_bytes(self):
        assert load_log(json.dumps(MINIMAL).encode()) == load_log(json.dumps(MINIMAL))

    def test_round_trip(self):
        log = load_log(json.dumps(MINIMAL))
        assert load_log(dump_log(log)) == log

    def test_dump_is_deterministic(self):
        log = load_log(json.dumps(MINIMAL))
        assert dump_log(log) == dump_log(load_log(dump_log(log)))

    def test_not_json(self):
        with pytest.raises(LogFormatError):
            load_log(b"{nope")

    def test_missing_sessions(self):
        with pytest.raises(LogFormatError):
            load_log(b"[]")
        with pytest.raises(LogFormatError):
            load_log(b"{}")

    def test_step_escaping_page_visit(self):
        bad = json.loads(json.dumps(MINIMAL))
        bad["sessions"][0]["tasks"][0]["page_visits"][0]["steps"][0]["end_ms"] = 8000
        with pytest.raises(LogFormatError) as exc:
            load_log(json.dumps(bad))
        assert "sessions[0].tasks[0].page_visits[0].steps[0]" in str(exc.value)
        assert "leaves its page visit" in str(exc.value)

    def test_reversed_interval(self):
        bad = json.loads(json.dumps(MINIMAL))
        visit = bad["sessions"][0]["tasks"][0]["page_visits"][0]
        visit["enter_ms"], visit["exit_ms"] = 7000, 0
        with pytest.raises(LogFormatError):
            load_log(json.dumps(bad))

    def test_unordered_page_visits(self):
        bad = json.loads(json.dumps(MINIMAL))
        visits = bad["sessions"][0]["tasks"][0]["page_visits"]
        visits.append({"page": "p1", "enter_ms": 1000, "exit_ms": 2000, "steps": []})
        with pytest.raises(LogFormatError) as exc:
            load_log(json.dumps(bad))
        assert "chronological" in str(exc.value)

    def test_zero_step_is_count_rejected(self):
        bad = json.loads(json.dumps(MINIMAL))
        bad["sessions"][0]["tasks"][0]["page_visits"][0]["steps"][0]["is_count"] = 0
        with pytest.raises(LogFormatError):
            load_log(json.dumps(bad))

    def test_negative_timestamp_rejected(self):
        bad = json.loads(json.dumps(MINIMAL))
        bad["sessions"][0]["tasks"][0]["page_visits"][0]["enter_ms"] = -1
        with pytest.raises(LogFormatError):
            load_log(json.dumps(bad))


class TestIqrFilter:
    def test_documented_example(self):
        retained, bounds = iqr_filter([1, 2, 3, 4, 100])
        assert retained == [1, 2, 3, 4]
        assert (bounds.q1, bounds.q3) == (2.0, 4.0)
        assert (bounds.lower, bounds.upper) == (-1.0, 7.0)

    def test_constant_data(self):
        retained, bounds = iqr_filter([5, 5, 5])
        assert retained == [5, 5, 5]
        assert bounds.iqr == 0.0

    def test_single_sample(self):
        retained, bounds = iqr_filter([7])
        assert retained == [7]
        assert bounds.q1 == bounds.q3 == 7.0

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            iqr_filter([])

    def test_idempotent_on_original_bounds(self):
        samples = [1.0, 2.0, 3.0, 4.0, 100.0, 0.5, 2.5]
        retained, bounds = iqr_filter(samples)
        again = [s for s in retained if bounds.lower <= s <= bounds.upper]
        assert again == retained

    def test_order_preserved(self):
        retained, _ = iqr_filter([4, 1, 100, 2, 3])
        assert retained == [4, 1, 2, 3]


class TestTaskTable:
    def test_constant_speed(self):
        rows = task_table(make_log([10.0] * 5))
        assert len(rows) == 1
        row = rows[0]
        assert (row.group, row.n, row.is_count) == ("t", 5, 10)
        assert row.mean_is_per_s == pytest.approx(1.0)

    def test_outlier_removed(self):
        rows = task_table(make_log([10.0, 10.0, 10.0, 10.0, 1000.0]))
        assert rows[0].n == 4
        assert rows[0].mean_is_per_s == pytest.approx(1.0)

    def test_mixed_is_count_rejected(self):
        log = EventLog(
            make_log([10.0], is_count=5).sessions + make_log([10.0], is_count=6).sessions
        )
        with pytest.raises(DomainError):
            task_table(log)

    def test_group_by_concept_name(self):
        log = EventLog(
            make_log([10.0], task_id="t1").sessions + make_log([20.0], task_id="t2").sessions
        )
        assert len(task_table(log, "task_id")) == 2
        assert len(task_table(log, "concept_name")) == 1

    def test_unknown_grouping(self):
        with pytest.raises(DomainError):
            task_table(EventLog(), "session_id")

    def test_empty_log(self):
        assert task_table(EventLog()) == []

    def test_task_without_visits_warns(self):
        log = EventLog((Session("s0", (Task("t", "demo", {}, 5, ()),)),))
        with pytest.warns(AnalyticsWarning):
            assert task_table(log) == []

    def test_determinism_under_session_order(self):
        forward = make_log([10.0, 12.0, 14.0])
        backward = EventLog(tuple(reversed(forward.sessions)))
        assert task_table(forward) == task_table(backward)

    def test_column_identity(self):
        for row in task_table(make_log([3.0, 5.0, 8.0, 13.0])):
            assert row.mean_is_per_s * row.mean_s == pytest.approx(row.is_count, rel=1e-9)

    def test_gaps_between_pages_count(self):
        visits = (
            PageVisit("p0", 0, 1000, (StepRecord("a", 0, 1000, 2),)),
            PageVisit("p1", 3000, 4000, (StepRecord("b", 3000, 4000, 2),)),
        )
        log = EventLog((Session("s0", (Task("t", "demo", {}, 4, visits),)),))
        rows = task_table(log)
        assert rows[0].mean_s == pytest.approx(4.0)


class TestStepTable:
    def test_reference_step_row(self):
        # 7 IS at mean 4.75 s must come out at 1.47 IS/sec
        rows = step_table(make_log([4.70, 4.80], is_count=7, label="pick a movie"))
        row = rows[0]
        assert row.group == "pick a movie"
        assert row.mean_s == pytest.approx(4.75)
        assert round(row.mean_is_per_s, 2) == 1.47

    def test_single_record(self):
        rows = step_table(make_log([2.0], is_count=2))
        assert rows[0].mean_is_per_s == pytest.approx(1.0)

    def test_mixed_is_count_under_label_rejected(self):
        log = EventLog(
            make_log([2.0], is_count=2).sessions + make_log([2.0], is_count=3).sessions
        )
        with pytest.raises(DomainError):
            step_table(log)

    def test_zero_duration_step_warns(self):
        record = StepRecord("blink", 0, 0, 1)
        visit = PageVisit("p", 0, 0, (record,))
        log = EventLog((Session("s0", (Task("t", "demo", {}, 1, (visit,)),)),))
        with pytest.warns(AnalyticsWarning):
            assert step_table(log) == []

    def test_labels_sorted(self):
        log = EventLog(
            make_log([1.0], is_count=1, label="zz").sessions
            + make_log([1.0], is_count=1, label="aa").sessions
        )
        assert [row.group for row in step_table(log)] == ["aa", "zz"]


class TestRendering:
    def test_csv_columns(self):
        text = table_to_csv(task_table(make_log([10.0])))
        header, row = text.strip().splitlines()
        assert header == ",".join(TABLE_COLUMNS)
        assert row == "t,1,10,10.00,10.00,10.00,1.00,1.00,1.00"

    def test_text_alignment(self):
        text = table_to_text(task_table(make_log([10.0, 12.5])))
        lines = text.splitlines()
        assert lines[0].split() == list(TABLE_COLUMNS)
        assert "1.00" in lines[1]

    def test_empty_table_renders_header(self):
        assert table_to_text([]).split() == list(TABLE_COLUMNS)
