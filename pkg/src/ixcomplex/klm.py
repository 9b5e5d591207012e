"""Keystroke-level execution-time estimates.

Maps abstract user actions (or explicitly entered operator formulas) to
seconds using per-operator unit times.  Operator names are namespaced
(PointClick, Glance, C_click, ...) because the single letters T, C, S, E
are already taken by the abstract action kinds; in formula text the short
uppercase letters remain accepted for convenience.

Composites:
    PointClick = M + C_click          (point at a target, then click)
    Glance     = S_saccade + P + E_mental   (look, perceive, decide)
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

from .concept import ActionKind, InteractionConcept, UserStep
from .errors import (
    DomainError,
    KlmFormulaError,
    UnknownOperatorError,
    UnmappedActionError,
)
from .expr import (
    Binding,
    Expression,
    ZERO,
    evaluate,
    format_expr,
    is_variable_name,
    parse_operator_expr,
)


class KlmOperator(enum.Enum):
    KEYSTROKE = "K"
    POINT = "M"
    CLICK = "C_click"
    SACCADE = "S_saccade"
    PERCEIVE = "P"
    RETRIEVE = "R"
    MENTAL_STEP = "E_mental"
    POINT_CLICK = "PointClick"
    GLANCE = "Glance"


# Formula-text spellings.  The bare uppercase letters match how operator
# formulas are conventionally written; T means the point-and-click
# composite there, not the Think action.
_OPERATOR_ALIASES: dict[str, KlmOperator] = {
    "K": KlmOperator.KEYSTROKE,
    "M": KlmOperator.POINT,
    "C": KlmOperator.CLICK,
    "C_click": KlmOperator.CLICK,
    "S": KlmOperator.SACCADE,
    "S_saccade": KlmOperator.SACCADE,
    "P": KlmOperator.PERCEIVE,
    "R": KlmOperator.RETRIEVE,
    "E": KlmOperator.MENTAL_STEP,
    "E_mental": KlmOperator.MENTAL_STEP,
    "T": KlmOperator.POINT_CLICK,
    "T_klm": KlmOperator.POINT_CLICK,
    "PointClick": KlmOperator.POINT_CLICK,
    "Q": KlmOperator.GLANCE,
    "Glance": KlmOperator.GLANCE,
}


@dataclass(frozen=True)
class KlmModel:
    """Primitive operator unit times in seconds; composites are derived."""

    keystroke: float = 0.23
    point: float = 1.5
    click: float = 0.23
    saccade: float = 0.23
    perceive: float = 0.1
    retrieve: float = 1.2
    mental_step: float = 0.07

    def __post_init__(self):
        for name, value in (
            ("keystroke", self.keystroke),
            ("point", self.point),
            ("click", self.click),
            ("saccade", self.saccade),
            ("perceive", self.perceive),
            ("retrieve", self.retrieve),
            ("mental_step", self.mental_step),
        ):
            if value <= 0:
                raise DomainError(f"unit time {name} must be positive, got {value}")

    @property
    def point_click(self) -> float:
        return self.point + self.click

    @property
    def glance(self) -> float:
        return self.saccade + self.perceive + self.mental_step

    def unit_time(self, operator: KlmOperator) -> float:
        if operator is KlmOperator.POINT_CLICK:
            return self.point_click
        if operator is KlmOperator.GLANCE:
            return self.glance
        return {
            KlmOperator.KEYSTROKE: self.keystroke,
            KlmOperator.POINT: self.point,
            KlmOperator.CLICK: self.click,
            KlmOperator.SACCADE: self.saccade,
            KlmOperator.PERCEIVE: self.perceive,
            KlmOperator.RETRIEVE: self.retrieve,
            KlmOperator.MENTAL_STEP: self.mental_step,
        }[operator]


def model_from_dict(data: Mapping[str, float]) -> KlmModel:
    """Build a model from a JSON-style mapping of primitive unit times."""
    fields = {
        "K": "keystroke",
        "M": "point",
        "C_click": "click",
        "S_saccade": "saccade",
        "P": "perceive",
        "R": "retrieve",
        "E_mental": "mental_step",
    }
    kwargs = {}
    for key, value in data.items():
        if key not in fields:
            raise DomainError(
                f"unknown or derived operator time {key!r}; settable: {sorted(fields)}"
            )
        kwargs[fields[key]] = float(value)
    return KlmModel(**kwargs)


@dataclass(frozen=True)
class ActionMapping:
    """Operators performed for each occurrence of an abstract action."""

    per_kind: Mapping[ActionKind, tuple[KlmOperator, ...]]


DEFAULT_MAPPING = ActionMapping(
    {
        ActionKind.THINK: (KlmOperator.GLANCE,),
        ActionKind.ENTER: (KlmOperator.POINT_CLICK,),
        ActionKind.CLICK: (KlmOperator.POINT_CLICK,),
    }
)


def mapping_from_dict(data: Mapping[str, Sequence[str]]) -> ActionMapping:
    per_kind: dict[ActionKind, tuple[KlmOperator, ...]] = {}
    for word, names in data.items():
        try:
            kind = ActionKind.from_word(word)
        except KeyError:
            raise DomainError(f"unknown action kind {word!r}") from None
        operators = []
        for name in names:
            operator = _OPERATOR_ALIASES.get(name)
            if operator is None:
                raise UnknownOperatorError(name)
            operators.append(operator)
        per_kind[kind] = tuple(operators)
    return ActionMapping(per_kind)


@dataclass(frozen=True)
class KlmExpression:
    """Count polynomial per operator; zero counts are dropped."""

    per_operator: Mapping[KlmOperator, Expression]

    def __post_init__(self):
        cleaned = {
            operator: self.per_operator[operator]
            for operator in KlmOperator
            if operator in self.per_operator
            and not self.per_operator[operator].is_zero()
        }
        object.__setattr__(self, "per_operator", cleaned)

    def get(self, operator: KlmOperator) -> Expression:
        return self.per_operator.get(operator, ZERO)


def klm_step(step: UserStep, mapping: ActionMapping = DEFAULT_MAPPING) -> KlmExpression:
    """Operator counts of one step under a mapping."""
    per_operator: dict[KlmOperator, Expression] = {}
    for kind, count in step.actions.items():
        operators = mapping.per_kind.get(kind)
        if not operators:
            raise UnmappedActionError(kind.word, step.label)
        contribution = step.repeat * count
        for operator in operators:
            per_operator[operator] = per_operator.get(operator, ZERO) + contribution
    return KlmExpression(per_operator)


def klm_from_concept(
    concept: InteractionConcept, mapping: ActionMapping = DEFAULT_MAPPING
) -> KlmExpression:
    total: dict[KlmOperator, Expression] = {}
    for step in concept.steps:
        for operator, count in klm_step(step, mapping).per_operator.items():
            total[operator] = total.get(operator, ZERO) + count
    return KlmExpression(total)


def klm_parse(text: str) -> KlmExpression:
    """Parse an operator-level formula such as "(m + 2)*Q + 9*T".

    Uppercase-initial names are operator symbols, lowercase names concept
    variables.  Every term must be linear in exactly one operator.
    """
    mixed = parse_operator_expr(text)
    collected: dict[KlmOperator, list] = {}
    for mono, coeff in mixed.terms:
        operator_parts = [(name, exp) for name, exp in mono if name[0].isupper()]
        variable_parts = [(name, exp) for name, exp in mono if not name[0].isupper()]
        if not operator_parts:
            raise KlmFormulaError(
                f"term without an operator: {format_expr(Expression.from_terms([(mono, coeff)]))!r}"
            )
        if len(operator_parts) > 1 or operator_parts[0][1] != 1:
            raise KlmFormulaError("each term must be linear in exactly one operator")
        operator = _OPERATOR_ALIASES.get(operator_parts[0][0])
        if operator is None:
            raise UnknownOperatorError(operator_parts[0][0])
        for name, _ in variable_parts:
            if not is_variable_name(name):
                raise KlmFormulaError(f"invalid variable name {name!r} in formula")
        collected.setdefault(operator, []).append((tuple(variable_parts), coeff))
    return KlmExpression(
        {operator: Expression.from_terms(terms) for operator, terms in collected.items()}
    )


def klm_time(
    expression: KlmExpression,
    model: KlmModel | None = None,
    binding: Binding | None = None,
) -> float:
    """Execution time in seconds: operator counts times unit times."""
    model = model or KlmModel()
    binding = binding if binding is not None else {}
    seconds = 0.0
    for operator, count in expression.per_operator.items():
        seconds += evaluate(count, binding) * model.unit_time(operator)
    return seconds


def klm_speed(is_count: int, seconds: float) -> float:
    """Interaction speed in IS per second for a known IS count."""
    if is_count < 0:
        raise DomainError(f"IS count cannot be negative, got {is_count}")
    if seconds <= 0:
        raise DomainError(f"execution time must be positive, got {seconds}")
    return is_count / seconds
