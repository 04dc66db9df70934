import pytest

from orderaug.model import BUILTIN_LABEL_SETS
from orderaug.prompts import (
    EXAMPLE_FOL_STRINGS,
    STAGE_PLACEHOLDERS,
    STAGES,
    MissingPlaceholder,
    PromptTemplate,
    dependency_inputs,
    fol_conversion_inputs,
    label_choices_phrase,
    solution_inputs,
)

from conftest import FIXTURE_LISTING, make_instance


class TestLabelChoicesPhrase:
    def test_three_way(self):
        assert label_choices_phrase(BUILTIN_LABEL_SETS["FOLIO"]) == "true, false, or unknown"

    def test_two_way(self):
        assert (
            label_choices_phrase(BUILTIN_LABEL_SETS["RuleTaker"])
            == "entailment or not entailment"
        )

    def test_four_way(self):
        assert (
            label_choices_phrase(BUILTIN_LABEL_SETS["LogicNLI"])
            == "entailment, neutral, self_contradiction, or contradiction"
        )


class TestPromptTemplate:
    @pytest.mark.parametrize("stage", STAGES)
    def test_default_template_builds(self, stage):
        tpl = PromptTemplate.for_stage(stage, BUILTIN_LABEL_SETS["FOLIO"])
        assert tpl.stage == stage
        assert tpl.task
        assert tpl.examples

    def test_unknown_stage(self):
        with pytest.raises(ValueError):
            PromptTemplate.for_stage("translation")

    def test_input_block_must_hold_placeholders(self):
        with pytest.raises(MissingPlaceholder):
            PromptTemplate(
                stage="fol_conversion",
                task="t",
                examples=(),
                input_block="{premises} only",
            )

    def test_render_requires_all_values(self):
        tpl = PromptTemplate.for_stage("fol_conversion")
        with pytest.raises(MissingPlaceholder):
            tpl.render(premises="p")

    def test_render_layout(self):
        tpl = PromptTemplate(
            stage="fol_conversion",
            task="TASK",
            examples=("EX1", "EX2"),
            input_block="{premises}//{hypothesis}",
        )
        assert tpl.render(premises="P", hypothesis="H") == "TASK\n\nEX1\n\nEX2\n\nP//H"

    def test_solution_task_inlines_choices(self):
        tpl = PromptTemplate.for_stage(
            "solution_generation", BUILTIN_LABEL_SETS["RuleTaker"]
        )
        assert "entailment or not entailment" in tpl.task
        assert "{label_choices}" not in tpl.task

    def test_default_examples_contain_walkthroughs(self):
        fol = PromptTemplate.for_stage("fol_conversion")
        assert any("Simpsons" in ex for ex in fol.examples)
        dep = PromptTemplate.for_stage("dependency_extraction")
        assert any(FIXTURE_LISTING in ex for ex in dep.examples)

    def test_example_fol_strings_exported(self):
        assert len(EXAMPLE_FOL_STRINGS) >= 20
        assert all(isinstance(s, str) and s for s in EXAMPLE_FOL_STRINGS)


class TestInputRenderers:
    def test_fol_conversion_inputs(self):
        inst = make_instance("a", n=3)
        values = fol_conversion_inputs(inst)
        assert set(values) == set(STAGE_PLACEHOLDERS["fol_conversion"])
        assert values["premises"].count("\n") == 2
        assert values["hypothesis"] == inst.conclusion_text

    def test_solution_inputs_without_fol(self):
        inst = make_instance("a", n=2)
        values = solution_inputs(inst)
        assert set(values) == set(STAGE_PLACEHOLDERS["solution_generation"])
        assert values["premises"].startswith("1. ")
        assert "Premises-FOL" not in values["premises"]
        assert values["label"] == "True"

    def test_solution_inputs_with_fol(self):
        inst = make_instance("a", n=2, with_fol=True)
        values = solution_inputs(inst)
        assert "Premises-FOL:" in values["premises"]
        assert "Hypothesis-FOL:" in values["hypothesis"]

    def test_dependency_inputs(self):
        inst = make_instance("a", n=2)
        values = dependency_inputs(inst, "Step 1: because.\n\nTrue")
        assert set(values) == set(STAGE_PLACEHOLDERS["dependency_extraction"])
        assert values["question"].startswith("Premises:")
        assert "Conclusion:" in values["question"]
        assert values["answer"] == "Step 1: because.\n\nTrue"

    def test_rendered_prompt_is_deterministic(self):
        inst = make_instance("a", n=3, with_fol=True)
        tpl = PromptTemplate.for_stage("solution_generation", inst.label_set)
        r1 = tpl.render(**solution_inputs(inst))
        r2 = tpl.render(**solution_inputs(inst))
        assert r1 == r2
