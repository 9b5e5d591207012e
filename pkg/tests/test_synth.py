import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ixcomplex.concept import ActionKind, InteractionConcept
from ixcomplex.errors import (
    DomainError,
    InvalidBindingError,
    NegativeCountError,
    UnboundVariableError,
)
from ixcomplex.expr import evaluate, format_expr
from ixcomplex.logs import load_log, dump_log, task_table
from ixcomplex.synth import (
    ActionCounts,
    SynthConfig,
    count_actions,
    eval_source,
    generate_log,
)

from helpers import (
    V1_BINDING,
    V2_BINDING,
    expressions,
    random_binding,
    random_concept,
)


class TestCountActions:
    def test_wizard_single_attempt(self, v1_concept):
        counts = count_actions(v1_concept, dict(V1_BINDING, a=1))
        assert counts.per_kind == {
            ActionKind.THINK: 29,
            ActionKind.ENTER: 6,
            ActionKind.CLICK: 7,
        }
        assert counts.total == 42

    def test_wizard_five_attempts(self, v1_concept):
        assert count_actions(v1_concept, V1_BINDING).total == 174

    def test_single_page(self, v2_concept):
        counts = count_actions(v2_concept, V2_BINDING)
        assert counts.per_kind == {
            ActionKind.THINK: 35,
            ActionKind.ENTER: 6,
            ActionKind.CLICK: 4,
        }
        assert counts.total == 45

    def test_empty_concept(self):
        counts = count_actions(InteractionConcept("empty"), {"m": 9})
        assert counts.per_kind == {}
        assert counts.total == 0

    def test_inadmissible_binding(self, v1_concept):
        with pytest.raises(NegativeCountError):
            count_actions(v1_concept, dict(V1_BINDING, a=0))

    def test_total_invariant_enforced(self):
        with pytest.raises(ValueError):
            ActionCounts({ActionKind.THINK: 2}, 3)


class TestEvalSource:
    def test_direct_interpretation(self):
        assert eval_source("a * (r + 2) - 1", {"a": 3, "r": 4}) == 17

    def test_unbound(self):
        with pytest.raises(UnboundVariableError):
            eval_source("a + q", {"a": 1})

    def test_negative_binding(self):
        with pytest.raises(InvalidBindingError):
            eval_source("a", {"a": -2})

    @given(expressions(), st.data())
    @settings(max_examples=80)
    def test_agrees_with_polynomial_engine(self, e, data):
        binding = {
            name: data.draw(st.integers(0, 9), label=name)
            for name in sorted(e.variables())
        }
        text = format_expr(e)
        try:
            expected = evaluate(e, binding)
        except NegativeCountError as exc:
            assert eval_source(text, binding) == exc.value
            return
        assert eval_source(text, binding) == expected


class TestGenerateLog:
    def test_degenerate_sd_gives_exact_durations(self, v2_concept):
        config = SynthConfig(v2_concept, V2_BINDING, sessions=4, speed_mean=1.0)
        log = generate_log(config)
        for session in log.sessions:
            task = session.tasks[0]
            assert task.is_count == 45
            assert task.duration_s == pytest.approx(45.0)

    def test_seed_determinism(self, v2_concept):
        config = SynthConfig(v2_concept, V2_BINDING, 10, 1.05, 0.2, seed=42)
        first = dump_log(generate_log(config))
        second = dump_log(generate_log(config))
        assert first == second

    def test_different_seeds_differ(self, v2_concept):
        a = generate_log(SynthConfig(v2_concept, V2_BINDING, 10, 1.05, 0.2, seed=1))
        b = generate_log(SynthConfig(v2_concept, V2_BINDING, 10, 1.05, 0.2, seed=2))
        assert a != b

    def test_generated_log_validates(self, v1_concept):
        config = SynthConfig(v1_concept, V1_BINDING, 20, 1.05, 0.3, seed=5)
        log = generate_log(config)
        assert load_log(dump_log(log)) == log

    def test_zero_is_steps_skipped(self, v1_concept):
        # a=1 makes the retry step contribute nothing
        config = SynthConfig(v1_concept, dict(V1_BINDING, a=1), 1, 1.0)
        log = generate_log(config)
        labels = [visit.page for visit in log.sessions[0].tasks[0].page_visits]
        assert "return to theater selection" not in labels
        assert log.sessions[0].tasks[0].is_count == 42

    def test_statistical_recovery(self, v2_concept):
        config = SynthConfig(v2_concept, V2_BINDING, 100, 1.05, 0.2, seed=20260809)
        rows = task_table(generate_log(config))
        assert len(rows) == 1
        assert rows[0].mean_is_per_s == pytest.approx(1.05, rel=0.05)

    def test_config_validation(self, v2_concept):
        with pytest.raises(DomainError):
            SynthConfig(v2_concept, V2_BINDING, sessions=0, speed_mean=1.0)
        with pytest.raises(DomainError):
            SynthConfig(v2_concept, V2_BINDING, sessions=1, speed_mean=0.0)
        with pytest.raises(DomainError):
            SynthConfig(v2_concept, V2_BINDING, sessions=1, speed_mean=1.0, speed_sd=-0.1)

    def test_unbound_binding_rejected(self, v2_concept):
        with pytest.raises(UnboundVariableError):
            generate_log(SynthConfig(v2_concept, {"m": 6}, 1, 1.0))


class TestOracleAgreement:
    def test_symbolic_equivalence_bulk(self):
        from ixcomplex.bigi import instantiate, normalize, sum_steps

        rng = random.Random(4711)
        for _ in range(40):
            concept = random_concept(rng)
            for _ in range(3):
                binding = random_binding(rng, concept)
                assert (
                    count_actions(concept, binding).total
                    == instantiate(normalize(sum_steps(concept)), binding)
                )

    def test_klm_count_agreement(self, v1_concept):
        from ixcomplex.klm import KlmOperator, klm_from_concept

        counts = count_actions(v1_concept, V1_BINDING)
        klm = klm_from_concept(v1_concept)
        glance = evaluate(klm.get(KlmOperator.GLANCE), V1_BINDING)
        point_click = evaluate(klm.get(KlmOperator.POINT_CLICK), V1_BINDING)
        assert glance == counts.per_kind[ActionKind.THINK]
        assert point_click == (
            counts.per_kind[ActionKind.ENTER] + counts.per_kind[ActionKind.CLICK]
        )
