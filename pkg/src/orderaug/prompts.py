"""Prompt templates for the three generation stages.

Each stage ships a default template: a fixed task statement, worked
example blocks, and an input section with named placeholders. Label
choices and example blocks are configurable per dataset; the task wording
is not.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

from .errors import OrderAugError
from .model import Instance, LabelSet

__all__ = [
    "STAGES",
    "STAGE_PLACEHOLDERS",
    "PromptTemplate",
    "MissingPlaceholder",
    "label_choices_phrase",
    "fol_conversion_inputs",
    "solution_inputs",
    "dependency_inputs",
    "EXAMPLE_FOL_STRINGS",
]

STAGES = ("fol_conversion", "solution_generation", "dependency_extraction")

# Placeholders each stage's input block must provide.
STAGE_PLACEHOLDERS: dict[str, tuple[str, ...]] = {
    "fol_conversion": ("premises", "hypothesis"),
    "solution_generation": ("premises", "hypothesis", "label"),
    "dependency_extraction": ("question", "answer"),
}


class MissingPlaceholder(OrderAugError):
    code = "MissingPlaceholder"


_FOL_TASK = (
    "Please parse the context and question into First-Order Logic formulas. "
    "Please use symbols as much as possible to express, such as ∀, ∧, "
    "→, ⊕, ¬, etc."
)

_FOL_EXAMPLE = """Premises:
If a cartoon character is yellow, it is from the Simpsons.
If a cartoon character is from Simpsons, then it is loved by children.
Ben is ugly or yellow.
Ramon being real is equivalent to Rhett being not modest and Philip being lazy.

Hypothesis:
James does not have lunch in the company.

Premises-FOL:
∀x (Yellow(x) → Simpsons(x))
∀x (Simpsons(x) → Loved(x))
(Yellow(ben) ∨ Ugly(ben))
real(Ramon) ⟺ (modest(Rhett) ∧ lazy(Philip))

Hypothesis-FOL:
¬HasLunch(james, company)"""

_FOL_INPUT = """---INPUT---
Premises:
{premises}
Hypothesis:
{hypothesis}
---OUTPUT---"""

_SOLUTION_TASK = (
    "Please solve the question step by step based on First-Order Logic rules "
    "such as Modus Ponens, determine whether the hypothesis is {label_choices} "
    "based on these premises."
)

_SOLUTION_EXAMPLE = """Premises:
1. Walter Folger Brown was an American politician and lawyer who served as the postmaster general.
2. Walter Folger Brown graduated from Harvard University with a Bachelor of Arts.
3. While they were both in Toledo, Walter Folger Brown's father practiced law with Walter Folger Brown.
4. Katherin Hafer married Walter Folger Brown.

Premises-FOL:
1. AmericanPolitician(walterBrown) ∧ Lawyer(walterBrown) ∧ ServedAs(walterBrown, postMasterGeneral)
2. Graduated(walterBrown, harvard) ∧ GraduatedWith(walterBrown, bachelorsOfArt)
3. ∃t (In(walterBrown, toledo, t) ∧ In(walterBrownFather, toledo, t) ∧ PracticedLawTogether(walterBrown, walterBrownFather, t))
4. Married(katherinHafer, walterBrown)

Hypothesis:
Walter Folger Brown was not in Toledo.

Hypothesis-FOL:
∃t (¬In(walterBrownFather, toledo, t))

Label:
False

Solution:
Step 1: Analyze Walter Folger Brown's presence in Toledo
The third premise states that there exists a time t such that:
In(walterBrown, toledo, t) ∧ In(walterBrownFather, toledo, t) ∧ PracticedLawTogether(walterBrown, walterBrownFather, t).
This means that Walter Folger Brown and his father were both in Toledo at the same time, and they practiced law together there.
Thus, we have clear evidence that Walter Folger Brown was indeed in Toledo at some point.

Step 2: Analyze the hypothesis's claim
The hypothesis states that Walter Folger Brown was not in Toledo, represented in FOL as:
∃t (¬In(walterBrownFather, toledo, t))
However, this contradicts the third premise, which explicitly states that both Walter Folger Brown and his father were in Toledo at the same time.
Therefore, the hypothesis that Walter Folger Brown was not in Toledo is False based on the premises.

Final Hypothesis:
The hypothesis "Walter Folger Brown was not in Toledo" is False."""

_SOLUTION_INPUT = """---INPUT---
Premises:
{premises}
Hypothesis:
{hypothesis}
Label:
{label}
---OUTPUT---"""

_DEPENDENCY_TASK = (
    "I will provide you with a description of the question and its answer, and "
    "the condition of the question is specific. The answer is done in steps. I "
    "hope you can extract the conditions and prerequisite steps used in each "
    "step of the answer. Please note that I am not asking you to regenerate the "
    "answer yourself, but rather to extract the conditions and prerequisite "
    "steps used in each step from the answer I have given you. Meanwhile, the "
    "conditions used in the steps are quite explicit, but the prerequisite "
    "steps used are quite implicit. I hope you can understand and summarize the "
    "prerequisite steps used in each step. Your answer should only include "
    "Conditions and prerequisite steps used."
)

_DEPENDENCY_EXAMPLE = """Question:
Premises:
1. Lana Wilson directed After Tiller, The Departure, and Miss Americana.
2. If a film is directed by a person, the person is a filmmaker.
3. After Tiller is a documentary.
4. The documentary is a type of film.
5. Lana Wilson is from Kirkland.
6. Kirkland is a US city.
7. If a person is from a city in a country, the person is from the country.
8. After Tiller is nominated for the Independent Spirit Award for Best Documentary.

Premises-FOL:
1. DirectedBy(afterTiller, lanaWilson) ∧ DirectedBy(theDeparture, lanaWilson) ∧ DirectedBy(missAmericana, lanaWilson)
2. ∀x ∀y (DirectedBy(x, y) → Filmmaker(y))
3. Documentary(afterTiller)
4. ∀x (Documentary(x) → Film(x))
5. From(lanaWilson, kirkland)
6. In(kirkland, unitedStates)
7. ∀x ∀y ∀z ((From(x, y) ∧ In(y, z)) → From(x, z))
8. Nomination(afterTiller, theIndependentSpiritAwardForBestDocumentary)

Conclusion:
Miss Americana is not directed by a filmmaker from Kirkland.

Conclusion-FOL:
¬∃t x (Filmmaker(x) ∧ From(x, kirkland) ∧ DirectedBy(missAmericana, x))

Answer:
Step 1: Analyze the premises regarding Lana Wilson's role as a filmmaker
From premise 1, we know that Lana Wilson directed Miss Americana. Therefore, we can conclude that Lana Wilson is a filmmaker based on premise 2, which states that if a film is directed by a person, that person is a filmmaker. Thus, we have:
    DirectedBy(missAmericana, lanaWilson) → Filmmaker(lanaWilson)

Step 2: Analyze Lana Wilson's origin
From premise 5, we know that Lana Wilson is from Kirkland. Therefore, we can conclude:
    From(lanaWilson, kirkland)

Step 3: Combine the information
Since we have established that Lana Wilson is a filmmaker and she is from Kirkland, we can conclude:
    Filmmaker(lanaWilson) ∧ From(lanaWilson, kirkland)

Step 4: Analyze the conclusion's claim
The conclusion states that Miss Americana is not directed by a filmmaker from Kirkland, represented in FOL as:
    ¬∃t x (Filmmaker(x) ∧ From(x, kirkland) ∧ DirectedBy(missAmericana, x))

However, we have already established that Lana Wilson, who directed Miss Americana, is indeed a filmmaker from Kirkland. This directly contradicts the conclusion.

Final Conclusion:
The conclusion "Miss Americana is not directed by a filmmaker from Kirkland" is False.

Conditions and prerequisite steps used:
step 1: condition 1, condition 2
step 2: condition 5
step 3: step 1, step 2
step 4: step 3"""

_DEPENDENCY_INPUT = """---INPUT---
Question:
{question}
Answer:
{answer}
---OUTPUT---"""

_DEFAULT_TASKS = {
    "fol_conversion": _FOL_TASK,
    "solution_generation": _SOLUTION_TASK,
    "dependency_extraction": _DEPENDENCY_TASK,
}
_DEFAULT_EXAMPLES = {
    "fol_conversion": (_FOL_EXAMPLE,),
    "solution_generation": (_SOLUTION_EXAMPLE,),
    "dependency_extraction": (_DEPENDENCY_EXAMPLE,),
}
_DEFAULT_INPUTS = {
    "fol_conversion": _FOL_INPUT,
    "solution_generation": _SOLUTION_INPUT,
    "dependency_extraction": _DEPENDENCY_INPUT,
}

# Every FOL formula that appears in the built-in example blocks. These
# anchor the parser fixtures: each must parse and round-trip.
EXAMPLE_FOL_STRINGS: tuple[str, ...] = (
    "∀x (Yellow(x) → Simpsons(x))",
    "∀x (Simpsons(x) → Loved(x))",
    "(Yellow(ben) ∨ Ugly(ben))",
    "real(Ramon) ⟺ (modest(Rhett) ∧ lazy(Philip))",
    "¬HasLunch(james, company)",
    "AmericanPolitician(walterBrown) ∧ Lawyer(walterBrown) ∧ ServedAs(walterBrown, postMasterGeneral)",
    "Graduated(walterBrown, harvard) ∧ GraduatedWith(walterBrown, bachelorsOfArt)",
    "∃t (In(walterBrown, toledo, t) ∧ In(walterBrownFather, toledo, t) ∧ PracticedLawTogether(walterBrown, walterBrownFather, t))",
    "Married(katherinHafer, walterBrown)",
    "∃t (¬In(walterBrownFather, toledo, t))",
    "DirectedBy(afterTiller, lanaWilson) ∧ DirectedBy(theDeparture, lanaWilson) ∧ DirectedBy(missAmericana, lanaWilson)",
    "∀x ∀y (DirectedBy(x, y) → Filmmaker(y))",
    "Documentary(afterTiller)",
    "∀x (Documentary(x) → Film(x))",
    "From(lanaWilson, kirkland)",
    "In(kirkland, unitedStates)",
    "∀x ∀y ∀z ((From(x, y) ∧ In(y, z)) → From(x, z))",
    "Nomination(afterTiller, theIndependentSpiritAwardForBestDocumentary)",
    "¬∃t x (Filmmaker(x) ∧ From(x, kirkland) ∧ DirectedBy(missAmericana, x))",
    "DirectedBy(missAmericana, lanaWilson) → Filmmaker(lanaWilson)",
    "Filmmaker(lanaWilson) ∧ From(lanaWilson, kirkland)",
)


def label_choices_phrase(label_set: LabelSet) -> str:
    """Join label values into prose, e.g. "true, false, or unknown"."""
    values = [v.lower() for v in label_set.values]
    if len(values) == 1:
        return values[0]
    if len(values) == 2:
        return f"{values[0]} or {values[1]}"
    return ", ".join(values[:-1]) + ", or " + values[-1]


def _placeholders(text: str) -> set[str]:
    return {name for _, name, _, _ in string.Formatter().parse(text) if name}


@dataclass(frozen=True)
class PromptTemplate:
    """Template for one stage: task statement, examples, input block."""

    stage: str
    task: str
    examples: tuple[str, ...]
    input_block: str

    def __post_init__(self):
        if self.stage not in STAGES:
            raise ValueError(f"unknown stage {self.stage!r}; expected one of {STAGES}")
        required = set(STAGE_PLACEHOLDERS[self.stage])
        missing = required - _placeholders(self.input_block)
        if missing:
            raise MissingPlaceholder(
                f"stage {self.stage!r} input block lacks {sorted(missing)}"
            )

    @classmethod
    def for_stage(
        cls,
        stage: str,
        label_set: LabelSet | None = None,
        examples: tuple[str, ...] | None = None,
    ) -> "PromptTemplate":
        if stage not in STAGES:
            raise ValueError(f"unknown stage {stage!r}; expected one of {STAGES}")
        task = _DEFAULT_TASKS[stage]
        if "{label_choices}" in task:
            choices = label_choices_phrase(label_set) if label_set else "true, false, or unknown"
            task = task.format(label_choices=choices)
        return cls(
            stage=stage,
            task=task,
            examples=examples if examples is not None else _DEFAULT_EXAMPLES[stage],
            input_block=_DEFAULT_INPUTS[stage],
        )

    def render(self, **values: str) -> str:
        required = set(STAGE_PLACEHOLDERS[self.stage])
        missing = required - set(values)
        if missing:
            raise MissingPlaceholder(
                f"stage {self.stage!r} render call lacks {sorted(missing)}"
            )
        filled = self.input_block.format(**values)
        return "\n\n".join([self.task, *self.examples, filled])


# ---------------------------------------------------------------------------
# Per-instance input sections.


def _numbered(lines) -> str:
    return "\n".join(f"{i}. {line}" for i, line in enumerate(lines, start=1))


def fol_conversion_inputs(inst: Instance) -> dict[str, str]:
    return {
        "premises": "\n".join(p.text for p in inst.premises),
        "hypothesis": inst.conclusion_text,
    }


def solution_inputs(inst: Instance) -> dict[str, str]:
    premises = _numbered(p.text for p in inst.premises)
    if all(p.fol is not None for p in inst.premises):
        premises += "\n\nPremises-FOL:\n" + _numbered(p.fol for p in inst.premises)
    hypothesis = inst.conclusion_text
    if inst.conclusion_fol is not None:
        hypothesis += "\n\nHypothesis-FOL:\n" + inst.conclusion_fol
    return {"premises": premises, "hypothesis": hypothesis, "label": inst.label}


def dependency_inputs(inst: Instance, solution_text: str) -> dict[str, str]:
    parts = ["Premises:", _numbered(p.text for p in inst.premises)]
    if all(p.fol is not None for p in inst.premises):
        parts += ["", "Premises-FOL:", _numbered(p.fol for p in inst.premises)]
    parts += ["", "Conclusion:", inst.conclusion_text]
    if inst.conclusion_fol is not None:
        parts += ["", "Conclusion-FOL:", inst.conclusion_fol]
    return {"question": "\n".join(parts), "answer": solution_text}
