"""Brute-force counting oracle and synthetic log generation.

count_actions is the reference the symbolic pipeline is checked against:
it walks a concept step by step, executes each step repeat-many times, and
adds up evaluated action counts.  No polynomial algebra is involved; leaf
expressions are evaluated by the small recursive interpreter below, which
parses expression text on its own instead of reusing the polynomial
engine's parser or evaluator.  The only engine facility used here is
canonical text rendering, to obtain a textual form of stored expressions.

generate_log produces deterministic synthetic event logs: per-step speeds
are drawn from a normal distribution (PCG64-seeded, via numpy's Generator,
so a seed pins the byte-exact output) and durations follow as IS divided by
speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .concept import ActionKind, InteractionConcept, UserStep
from .errors import DomainError, InvalidBindingError, NegativeCountError, UnboundVariableError
from .expr import format_expr
from .logs import EventLog, PageVisit, Session, StepRecord, Task

_MIN_SPEED = 0.01


@dataclass(frozen=True)
class ActionCounts:
    """Concrete action tally at one binding; zero kinds are dropped."""

    per_kind: Mapping[ActionKind, int]
    total: int

    def __post_init__(self):
        if self.total != sum(self.per_kind.values()):
            raise ValueError("total does not match the per-kind counts")


def count_actions(concept: InteractionConcept, binding: Mapping[str, int]) -> ActionCounts:
    """Count actions by simulated execution: loop and add, nothing else."""
    totals = {kind: 0 for kind in ActionKind}
    for step in concept.steps:
        repeat = _leaf_value(step.repeat, binding)
        per_execution = {
            kind: _leaf_value(expr, binding) for kind, expr in step.actions.items()
        }
        for _ in range(repeat):
            for kind, count in per_execution.items():
                totals[kind] += count
    per_kind = {kind: count for kind, count in totals.items() if count}
    return ActionCounts(per_kind, sum(totals.values()))


def _leaf_value(expr, binding: Mapping[str, int]) -> int:
    value = eval_source(format_expr(expr), binding)
    if value < 0:
        raise NegativeCountError(format_expr(expr), value)
    return value


def eval_source(text: str, binding: Mapping[str, int]) -> int:
    """Evaluate expression text by direct recursion over its parse tree.

    Deliberately self-contained: own tokenizer, own recursive descent, own
    arithmetic, so agreement with the polynomial engine is meaningful.
    """
    cursor = _Cursor(_tokens(text))
    value = _eval_expr(cursor, binding)
    if cursor.peek() is not None:
        raise DomainError(f"unexpected {cursor.peek()!r} in expression {text!r}")
    return value


def _tokens(text: str) -> list[object]:
    out: list[object] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
        elif ch.isdigit():
            end = pos
            while end < len(text) and text[end].isdigit():
                end += 1
            out.append(int(text[pos:end]))
            pos = end
        elif ch.isalpha() or ch == "_":
            end = pos
            while end < len(text) and (text[end].isalnum() or text[end] == "_"):
                end += 1
            out.append(text[pos:end])
            pos = end
        elif ch in "+-*()":
            out.append(ch)
            pos += 1
        else:
            raise DomainError(f"unexpected character {ch!r} in expression")
    return out


class _Cursor:
    def __init__(self, tokens: list[object]):
        self.tokens = tokens
        self.index = 0

    def peek(self) -> object | None:
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return None

    def take(self) -> object:
        token = self.peek()
        if token is None:
            raise DomainError("unexpected end of expression")
        self.index += 1
        return token


def _eval_expr(cursor: _Cursor, binding: Mapping[str, int]) -> int:
    negate = cursor.peek() == "-"
    if negate:
        cursor.take()
    value = _eval_term(cursor, binding)
    if negate:
        value = -value
    while cursor.peek() in ("+", "-"):
        op = cursor.take()
        rhs = _eval_term(cursor, binding)
        value = value + rhs if op == "+" else value - rhs
    return value


def _eval_term(cursor: _Cursor, binding: Mapping[str, int]) -> int:
    value = _eval_factor(cursor, binding)
    while cursor.peek() == "*":
        cursor.take()
        value = value * _eval_factor(cursor, binding)
    return value


def _eval_factor(cursor: _Cursor, binding: Mapping[str, int]) -> int:
    token = cursor.take()
    if isinstance(token, int):
        return token
    if token == "(":
        value = _eval_expr(cursor, binding)
        if cursor.take() != ")":
            raise DomainError("missing closing parenthesis")
        return value
    if isinstance(token, str) and token not in "+-*()":
        if token not in binding:
            raise UnboundVariableError(token)
        value = binding[token]
        if value < 0:
            raise InvalidBindingError(token, value)
        return value
    raise DomainError(f"unexpected {token!r} in expression")


# --- synthetic logs --------------------------------------------------------


@dataclass(frozen=True)
class SynthConfig:
    concept: InteractionConcept
    binding: Mapping[str, int]
    sessions: int
    speed_mean: float
    speed_sd: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.sessions < 1:
            raise DomainError(f"sessions must be positive, got {self.sessions}")
        if self.speed_mean <= 0:
            raise DomainError(f"speed_mean must be positive, got {self.speed_mean}")
        if self.speed_sd < 0:
            raise DomainError(f"speed_sd must be nonnegative, got {self.speed_sd}")


def generate_log(config: SynthConfig) -> EventLog:
    """Simulate sessions executing the concept at sampled speeds.

    One page visit per executed step; steps that contribute zero IS are
    skipped.  Timestamps are cumulative and rounded once per boundary, so a
    task's duration equals the rounded sum of its step durations.  Sessions
    are generated sequentially for reproducibility: a fixed seed yields a
    byte-identical log.
    """
    rng = np.random.Generator(np.random.PCG64(config.seed))
    step_counts = [
        (step, _step_is(step, config.binding)) for step in config.concept.steps
    ]
    total_is = sum(count for _, count in step_counts)
    sessions = []
    for index in range(config.sessions):
        clock_ms = 0.0
        visits = []
        for step, count in step_counts:
            if count == 0:
                continue
            speed = max(float(rng.normal(config.speed_mean, config.speed_sd)), _MIN_SPEED)
            start = round(clock_ms)
            clock_ms += count / speed * 1000.0
            end = round(clock_ms)
            record = StepRecord(step.label, start, end, count)
            visits.append(PageVisit(step.label, start, end, (record,)))
        task = Task(
            task_id=config.concept.name,
            concept_name=config.concept.name,
            binding=dict(config.binding),
            is_count=total_is,
            page_visits=tuple(visits),
        )
        sessions.append(Session(f"s{index:04d}", (task,)))
    return EventLog(tuple(sessions))


def _step_is(step: UserStep, binding: Mapping[str, int]) -> int:
    repeat = _leaf_value(step.repeat, binding)
    per_execution = sum(
        _leaf_value(expr, binding) for expr in step.actions.values()
    )
    return repeat * per_execution
