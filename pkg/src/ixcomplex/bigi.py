"""Interaction-complexity derivation.

The pipeline turns a concept into numbers in five moves: per-step action
counts, the kind-wise sum over all steps, a single polynomial in abstract
interaction steps (IS), the simplified dominant part with a growth-class
label, and finally instantiation at a concrete variable binding.

Everything is computed from the step definitions.  A separately published
or hand-written formula can always be evaluated directly through the
expression layer and reported side by side, so "as-defined" and
"as-published" values never get silently merged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .concept import ActionKind, InteractionConcept, UserStep
from .expr import (
    Binding,
    Expression,
    ZERO,
    evaluate,
    format_expr,
    total_degree,
)

_CLASS_NAMES = {0: "constant", 1: "linear", 2: "quadratic", 3: "cubic"}


def class_label(degree: int) -> str:
    return _CLASS_NAMES.get(degree, f"degree-{degree}")


@dataclass(frozen=True)
class ActionVector:
    """Count polynomials organized by action kind; zero kinds are dropped."""

    per_kind: Mapping[ActionKind, Expression]

    def __post_init__(self):
        cleaned = {
            kind: self.per_kind[kind]
            for kind in ActionKind
            if kind in self.per_kind and not self.per_kind[kind].is_zero()
        }
        object.__setattr__(self, "per_kind", cleaned)

    def get(self, kind: ActionKind) -> Expression:
        return self.per_kind.get(kind, ZERO)

    def total(self) -> Expression:
        result = ZERO
        for expr in self.per_kind.values():
            result = result + expr
        return result

    def __add__(self, other: "ActionVector") -> "ActionVector":
        merged = dict(self.per_kind)
        for kind, expr in other.per_kind.items():
            merged[kind] = merged.get(kind, ZERO) + expr
        return ActionVector(merged)

    @staticmethod
    def zero() -> "ActionVector":
        return ActionVector({})


@dataclass(frozen=True)
class NormalizedComplexity:
    """The IS function: every action kind replaced by one interaction step."""

    is_function: Expression


@dataclass(frozen=True)
class SimplifiedComplexity:
    retained: Expression
    class_label: str


@dataclass(frozen=True)
class ComplexityReport:
    per_step: tuple[tuple[str, ActionVector], ...]
    summed: ActionVector
    normalized: NormalizedComplexity
    simplified: SimplifiedComplexity
    instantiated: tuple[dict[str, int], int] | None = None


def step_function(step: UserStep) -> ActionVector:
    """Per-kind count of one step: repeat times the per-execution count."""
    return ActionVector(
        {kind: step.repeat * expr for kind, expr in step.actions.items()}
    )


def sum_steps(concept: InteractionConcept) -> ActionVector:
    total = ActionVector.zero()
    for step in concept.steps:
        total = total + step_function(step)
    return total


def normalize(vector: ActionVector) -> NormalizedComplexity:
    return NormalizedComplexity(vector.total())


def simplify(normalized: NormalizedComplexity) -> SimplifiedComplexity:
    """Keep the fastest-growing part of the IS function, coefficient included.

    The dominant monomials are those of maximal total degree; every monomial
    whose variables form a nonempty subset of some dominant monomial's
    variable set is retained with its coefficient, and everything else is
    dropped.  This keeps scale factors that ride on the dominant variables
    (11*a next to a*r) while shedding independent lower-order terms (m + 5).
    A constant function is kept whole.  Ties between dominant monomials need
    no breaking: all of them are retained.
    """
    function = normalized.is_function
    degree = total_degree(function)
    if degree == 0:
        return SimplifiedComplexity(function, class_label(0))
    dominant = [
        frozenset(name for name, _ in mono)
        for mono, _ in function.terms
        if sum(exp for _, exp in mono) == degree
    ]
    retained = Expression.from_terms(
        (mono, coeff)
        for mono, coeff in function.terms
        if frozenset(name for name, _ in mono)
        and any(
            frozenset(name for name, _ in mono) <= dom for dom in dominant
        )
    )
    return SimplifiedComplexity(retained, class_label(degree))


def instantiate(normalized: NormalizedComplexity, binding: Binding) -> int:
    """Concrete IS count at a binding; exact, never negative."""
    return evaluate(normalized.is_function, binding)


def analyze(
    concept: InteractionConcept, binding: Binding | None = None
) -> ComplexityReport:
    per_step = tuple((step.label, step_function(step)) for step in concept.steps)
    summed = sum_steps(concept)
    normalized = normalize(summed)
    simplified = simplify(normalized)
    instantiated = None
    if binding is not None:
        instantiated = (dict(binding), instantiate(normalized, binding))
    return ComplexityReport(per_step, summed, normalized, simplified, instantiated)


# --- rendering helpers -----------------------------------------------------


def vector_to_dict(vector: ActionVector) -> dict[str, str]:
    return {kind.value: format_expr(expr) for kind, expr in vector.per_kind.items()}


def report_to_dict(report: ComplexityReport) -> dict:
    instantiated = None
    if report.instantiated is not None:
        binding, count = report.instantiated
        instantiated = {"binding": dict(sorted(binding.items())), "is": count}
    return {
        "per_step": [
            {"label": label, "actions": vector_to_dict(vector)}
            for label, vector in report.per_step
        ],
        "summed": vector_to_dict(report.summed),
        "normalized": format_expr(report.normalized.is_function),
        "simplified": {
            "retained": format_expr(report.simplified.retained),
            "class_label": report.simplified.class_label,
        },
        "instantiated": instantiated,
    }


def factored_text(expression: Expression) -> str:
    """Display form with the greedy common factor pulled out.

    Purely cosmetic: correctness is judged on the expanded polynomial, this
    just renders a*d + a*r + 11*a as a*(d + r + 11) for reports.
    """
    terms = expression.terms
    if len(terms) < 2:
        return format_expr(expression)
    common: dict[str, int] = dict(terms[0][0])
    for mono, _ in terms[1:]:
        powers = dict(mono)
        common = {
            name: min(exp, powers[name])
            for name, exp in common.items()
            if name in powers
        }
    coeff_gcd = math.gcd(*(abs(coeff) for _, coeff in terms))
    if not common and coeff_gcd == 1:
        return format_expr(expression)
    inner = Expression.from_terms(
        (_mono_without(mono, common), coeff // coeff_gcd) for mono, coeff in terms
    )
    prefix = ([] if coeff_gcd == 1 else [str(coeff_gcd)]) + [
        name for name, exp in sorted(common.items()) for _ in range(exp)
    ]
    return "*".join(prefix) + "*(" + format_expr(inner) + ")"


def _mono_without(mono, common: dict[str, int]):
    reduced = []
    for name, exp in mono:
        remaining = exp - common.get(name, 0)
        if remaining:
            reduced.append((name, remaining))
    return tuple(reduced)
