"""Interaction concepts: data model, file format, validation.

A concept names the variables that influence interaction complexity and
lists the user steps of a task.  Each step carries per-action-kind count
expressions and an optional repetition factor; a conditional step ("only
taken when the seat is unavailable") is modelled through its repeat
expression, with the condition kept as a human-readable note.

Concept file format (UTF-8, line oriented, '#' starts a comment running to
the end of the line):

    concept "<name>"
    var <ident>                  # <description>
    step "<label>" [repeat <expr>] { <A>: <expr> [; <A>: <expr>]* }  # <note>

The first significant line must be the concept line.  A comment on a var
line is kept as that variable's description, and a comment after a step's
closing brace is kept as the step's note; all other comments are ignored.
<A> is one of T (think), E (enter content), C (click), S (scroll), X (use
of an external application).  Every variable referenced by a step must be
declared with a var line somewhere in the file.

There is also a JSON form mirroring the model fields (see concept_to_dict),
with expressions rendered as canonical text.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ConceptSyntaxError, DomainError
from .expr import ONE, Expression, format_expr, is_variable_name, parse_expr


class ActionKind(enum.Enum):
    """Abstract, modality-agnostic user actions."""

    THINK = "T"
    ENTER = "E"
    CLICK = "C"
    SCROLL = "S"
    EXTERNAL = "X"

    @property
    def word(self) -> str:
        """Full name as used in JSON files: Think, Enter, Click, ..."""
        return self.name.capitalize()

    @classmethod
    def from_letter(cls, letter: str) -> "ActionKind":
        for kind in cls:
            if kind.value == letter:
                return kind
        raise KeyError(letter)

    @classmethod
    def from_word(cls, word: str) -> "ActionKind":
        for kind in cls:
            if kind.word == word:
                return kind
        raise KeyError(word)


@dataclass(frozen=True)
class ConceptVariable:
    name: str
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "description", self.description.strip())


@dataclass(frozen=True)
class UserStep:
    """One task-level stage, e.g. "select a movie".

    actions maps each action kind to the count of actions per execution of
    the step; kinds with a zero count are dropped.  repeat scales the whole
    step (default 1).
    """

    label: str
    actions: Mapping[ActionKind, Expression] = field(default_factory=dict)
    repeat: Expression = ONE
    note: str | None = None

    def __post_init__(self):
        cleaned = {
            kind: expr for kind, expr in self.actions.items() if not expr.is_zero()
        }
        object.__setattr__(self, "actions", cleaned)
        note = self.note.strip() if self.note is not None else None
        object.__setattr__(self, "note", note or None)

    def ordered_actions(self) -> list[tuple[ActionKind, Expression]]:
        return [(kind, self.actions[kind]) for kind in ActionKind if kind in self.actions]


@dataclass(frozen=True)
class InteractionConcept:
    name: str
    variables: tuple[ConceptVariable, ...] = ()
    steps: tuple[UserStep, ...] = ()

    def variable_names(self) -> list[str]:
        return [variable.name for variable in self.variables]


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    message: str
    step: str | None = None


def validate(concept: InteractionConcept) -> list[Diagnostic]:
    """Check model invariants; errors first, then warnings.

    An empty list means every invariant holds and no step is degenerate.
    Zero-action steps are reported as warnings only: they are legal
    placeholders in early sketches.
    """
    diagnostics: list[Diagnostic] = []
    if not concept.name:
        diagnostics.append(Diagnostic("error", "concept name is empty"))
    seen_vars: set[str] = set()
    for variable in concept.variables:
        if not is_variable_name(variable.name):
            diagnostics.append(
                Diagnostic("error", f"invalid variable name {variable.name!r}")
            )
        if variable.name in seen_vars:
            diagnostics.append(
                Diagnostic("error", f"duplicate variable {variable.name!r}")
            )
        seen_vars.add(variable.name)

    seen_labels: set[str] = set()
    for step in concept.steps:
        if not step.label:
            diagnostics.append(Diagnostic("error", "empty step label", step.label))
        if step.label in seen_labels:
            diagnostics.append(
                Diagnostic("error", f"duplicate step label {step.label!r}", step.label)
            )
        seen_labels.add(step.label)
        used = step.repeat.variables()
        for expr in step.actions.values():
            used |= expr.variables()
        for name in sorted(used - seen_vars):
            diagnostics.append(
                Diagnostic("error", f"undeclared variable {name!r}", step.label)
            )
        if not step.actions:
            diagnostics.append(
                Diagnostic("warning", "step contributes no interaction", step.label)
            )
    diagnostics.sort(key=lambda d: d.severity)  # errors before warnings
    return diagnostics


# --- file format -----------------------------------------------------------


def parse_concept(text: str) -> InteractionConcept:
    """Parse a concept file; rejects undeclared variables and duplicates.

    Raises ConceptSyntaxError with the 1-based line and column of the first
    problem.  Parsing is total: any input yields either a concept or that
    error, never a crash.
    """
    concept_name: str | None = None
    variables: list[ConceptVariable] = []
    step_lines: list[tuple[int, str, str | None]] = []

    for number, raw_line in enumerate(text.splitlines(), start=1):
        code, comment = _split_comment(raw_line, number)
        stripped = code.strip()
        if not stripped:
            continue
        keyword = stripped.split(None, 1)[0]
        if keyword == "concept":
            if concept_name is not None:
                raise ConceptSyntaxError("duplicate concept line", number)
            concept_name = _parse_concept_line(code, number)
        elif concept_name is None:
            raise ConceptSyntaxError(
                "the concept line must come before anything else", number
            )
        elif keyword == "var":
            variables.append(_parse_var_line(code, comment, variables, number))
        elif keyword == "step":
            step_lines.append((number, code, comment))
        else:
            raise ConceptSyntaxError(
                f"expected 'concept', 'var' or 'step', found {keyword!r}",
                number,
                code.index(keyword) + 1,
            )

    if concept_name is None:
        raise ConceptSyntaxError("missing concept line", 1)

    declared = {variable.name for variable in variables}
    steps: list[UserStep] = []
    labels: set[str] = set()
    for number, code, comment in step_lines:
        step = _parse_step_line(code, comment, number)
        if step.label in labels:
            raise ConceptSyntaxError(f"duplicate step label {step.label!r}", number)
        labels.add(step.label)
        used = step.repeat.variables()
        for expr in step.actions.values():
            used |= expr.variables()
        undeclared = sorted(used - declared)
        if undeclared:
            raise ConceptSyntaxError(
                f"undeclared variable {undeclared[0]!r}", number
            )
        steps.append(step)

    return InteractionConcept(concept_name, tuple(variables), tuple(steps))


def _split_comment(line: str, number: int) -> tuple[str, str | None]:
    in_quotes = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_quotes = not in_quotes
        elif ch == "#" and not in_quotes:
            return line[:i], line[i + 1 :].strip() or None
    if in_quotes:
        raise ConceptSyntaxError("unterminated quote", number, line.index('"') + 1)
    return line, None


def _parse_quoted(code: str, start: int, number: int) -> tuple[str, int]:
    if start >= len(code) or code[start] != '"':
        raise ConceptSyntaxError("expected an opening quote", number, start + 1)
    end = code.find('"', start + 1)
    if end < 0:
        raise ConceptSyntaxError("unterminated quote", number, start + 1)
    return code[start + 1 : end], end + 1


def _skip_spaces(code: str, pos: int) -> int:
    while pos < len(code) and code[pos].isspace():
        pos += 1
    return pos


def _parse_concept_line(code: str, number: int) -> str:
    pos = _skip_spaces(code, code.index("concept") + len("concept"))
    name, pos = _parse_quoted(code, pos, number)
    if code[pos:].strip():
        raise ConceptSyntaxError("unexpected text after the concept name", number, pos + 1)
    if not name:
        raise ConceptSyntaxError("concept name is empty", number)
    return name


def _parse_var_line(
    code: str,
    comment: str | None,
    variables: list[ConceptVariable],
    number: int,
) -> ConceptVariable:
    rest = code.strip()[len("var") :].strip()
    if not rest:
        raise ConceptSyntaxError("missing variable name", number)
    if not is_variable_name(rest):
        raise ConceptSyntaxError(f"invalid variable name {rest!r}", number)
    if any(variable.name == rest for variable in variables):
        raise ConceptSyntaxError(f"duplicate variable {rest!r}", number)
    return ConceptVariable(rest, comment or "")


def _parse_step_line(code: str, comment: str | None, number: int) -> UserStep:
    pos = _skip_spaces(code, code.index("step") + len("step"))
    label, pos = _parse_quoted(code, pos, number)
    if not label:
        raise ConceptSyntaxError("empty step label", number)
    pos = _skip_spaces(code, pos)

    repeat = ONE
    boundary = pos + len("repeat")
    if code.startswith("repeat", pos) and (
        boundary >= len(code) or not (code[boundary].isalnum() or code[boundary] == "_")
    ):
        brace = code.find("{", pos)
        if brace < 0:
            raise ConceptSyntaxError("missing '{' after repeat expression", number, pos + 1)
        repeat_text = code[pos + len("repeat") : brace]
        repeat = _parse_embedded(repeat_text, pos + len("repeat"), number)
        pos = brace

    if pos >= len(code) or code[pos] != "{":
        raise ConceptSyntaxError("expected '{'", number, pos + 1)
    closing = code.find("}", pos)
    if closing < 0:
        raise ConceptSyntaxError("missing '}'", number, pos + 1)
    body = code[pos + 1 : closing]
    if code[closing + 1 :].strip():
        raise ConceptSyntaxError("unexpected text after '}'", number, closing + 2)

    actions: dict[ActionKind, Expression] = {}
    offset = pos + 1
    for part in body.split(";"):
        if not part.strip():
            offset += len(part) + 1
            continue
        letter, sep, expr_text = part.partition(":")
        if not sep:
            raise ConceptSyntaxError(
                "expected '<action>: <expr>'", number, offset + 1
            )
        letter = letter.strip()
        try:
            kind = ActionKind.from_letter(letter)
        except KeyError:
            raise ConceptSyntaxError(
                f"unknown action kind {letter!r} (expected one of T, E, C, S, X)",
                number,
                offset + 1,
            ) from None
        if kind in actions:
            raise ConceptSyntaxError(
                f"duplicate action kind {letter!r}", number, offset + 1
            )
        actions[kind] = _parse_embedded(
            expr_text, offset + len(part) - len(expr_text), number
        )
        offset += len(part) + 1

    return UserStep(label, actions, repeat, comment)


def _parse_embedded(text: str, base: int, number: int) -> Expression:
    from .errors import ExpressionSyntaxError

    try:
        return parse_expr(text)
    except ExpressionSyntaxError as exc:
        raise ConceptSyntaxError(str(exc), number, base + exc.offset + 1) from None


def serialize_concept(concept: InteractionConcept) -> str:
    """Render the canonical file form; reparsing it reproduces the concept.

    Labels and the concept name must not contain double quotes or newlines;
    descriptions and notes must be single-line.  A repeat of 1 is elided.
    """
    _require_serializable(concept)
    lines = [f'concept "{concept.name}"']
    for variable in concept.variables:
        if variable.description:
            lines.append(f"var {variable.name}  # {variable.description}")
        else:
            lines.append(f"var {variable.name}")
    for step in concept.steps:
        parts = [f'step "{step.label}"']
        if step.repeat != ONE:
            parts.append(f"repeat {format_expr(step.repeat)}")
        body = "; ".join(
            f"{kind.value}: {format_expr(expr)}" for kind, expr in step.ordered_actions()
        )
        parts.append("{ " + body + " }" if body else "{ }")
        line = " ".join(parts)
        if step.note:
            line += f"  # {step.note}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def _require_serializable(concept: InteractionConcept) -> None:
    def check(text: str, what: str, allow_quote: bool = True) -> None:
        if "\n" in text or "\r" in text:
            raise DomainError(f"{what} must be single-line: {text!r}")
        if not allow_quote and '"' in text:
            raise DomainError(f"{what} must not contain a double quote: {text!r}")

    check(concept.name, "concept name", allow_quote=False)
    for variable in concept.variables:
        check(variable.description, "variable description")
    for step in concept.steps:
        check(step.label, "step label", allow_quote=False)
        if step.note:
            check(step.note, "step note")


# --- JSON form -------------------------------------------------------------


def concept_to_dict(concept: InteractionConcept) -> dict:
    return {
        "name": concept.name,
        "variables": [
            {"name": variable.name, "description": variable.description}
            for variable in concept.variables
        ],
        "steps": [
            {
                "label": step.label,
                "repeat": format_expr(step.repeat),
                "actions": {
                    kind.value: format_expr(expr)
                    for kind, expr in step.ordered_actions()
                },
                "note": step.note,
            }
            for step in concept.steps
        ],
    }


def concept_from_dict(data: Mapping) -> InteractionConcept:
    try:
        variables = tuple(
            ConceptVariable(v["name"], v.get("description", ""))
            for v in data.get("variables", ())
        )
        steps = tuple(
            UserStep(
                s["label"],
                {
                    ActionKind.from_letter(letter): parse_expr(text)
                    for letter, text in s.get("actions", {}).items()
                },
                parse_expr(s.get("repeat", "1")),
                s.get("note"),
            )
            for s in data.get("steps", ())
        )
        concept = InteractionConcept(str(data["name"]), variables, steps)
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed concept data: {exc}") from None
    problems = [d for d in validate(concept) if d.severity == "error"]
    if problems:
        raise DomainError(problems[0].message)
    return concept
