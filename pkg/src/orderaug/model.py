"""Core domain types: premises, instances, solution steps, and permutations.

All types are immutable value objects. Indices are 1-based throughout
(premise 1 is the first premise, step 1 the first step); algorithms convert
to 0-based internally where convenient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

__all__ = [
    "Premise",
    "LabelSet",
    "Instance",
    "Step",
    "Solution",
    "Permutation",
    "Violation",
    "BUILTIN_LABEL_SETS",
    "LINEAGES",
    "canonicalize_label",
    "validate_instance",
    "validate_solution",
]

# Provenance tags for augmented records.
LINEAGES = (
    "original",
    "condition_shuffled",
    "answer_steps_shuffled",
    "condition_and_answer_shuffled",
    "random_steps_shuffled",
)


@dataclass(frozen=True)
class Premise:
    """One input statement, with its 1-based position and optional FOL form."""

    index: int
    text: str
    fol: str | None = None


@dataclass(frozen=True)
class LabelSet:
    """A named, ordered set of allowed label strings for one dataset family."""

    name: str
    values: tuple[str, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("label set needs at least one value")
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"duplicate label values in {self.name!r}")


BUILTIN_LABEL_SETS: dict[str, LabelSet] = {
    "FOLIO": LabelSet("FOLIO", ("True", "False", "Unknown")),
    "RuleTaker": LabelSet("RuleTaker", ("entailment", "not entailment")),
    "LogicNLI": LabelSet(
        "LogicNLI", ("entailment", "neutral", "self_contradiction", "contradiction")
    ),
}


def canonicalize_label(raw: str) -> str:
    """One-time label cleanup at ingest: trim surrounding whitespace only.

    Labels stay case-sensitive; the supported dataset families use distinct
    literal strings.
    """
    return raw.strip()


@dataclass(frozen=True)
class Instance:
    """One logical-reasoning problem: ordered premises, a conclusion, a label."""

    id: str
    premises: tuple[Premise, ...]
    conclusion_text: str
    label: str
    label_set: LabelSet
    conclusion_fol: str | None = None

    @property
    def n(self) -> int:
        return len(self.premises)

    def premise_texts(self) -> list[str]:
        return [p.text for p in self.premises]


@dataclass(frozen=True)
class Step:
    """One reasoning step.

    ``premises_used`` holds 1-based premise indices consumed directly;
    ``steps_used`` holds ids of prerequisite steps whose results this step
    builds on. ``text`` is the full prose of the step, headed "Step N: ...".
    """

    id: int
    goal: str
    premises_used: frozenset[int]
    steps_used: frozenset[int]
    result: str
    text: str


@dataclass(frozen=True)
class Solution:
    """An ordered list of reasoning steps plus the restated final answer."""

    instance_id: str
    steps: tuple[Step, ...]
    final_answer: str

    @property
    def m(self) -> int:
        return len(self.steps)

    def step_by_id(self, step_id: int) -> Step:
        for s in self.steps:
            if s.id == step_id:
                return s
        raise KeyError(step_id)


@dataclass(frozen=True)
class Permutation:
    """A bijection on 1..n. ``mapping[i-1]`` is the new position of original index i.

    Applying the permutation to a list places the item originally at
    position i at position ``mapping[i-1]``.
    """

    mapping: tuple[int, ...]

    def __post_init__(self):
        n = len(self.mapping)
        if sorted(self.mapping) != list(range(1, n + 1)):
            raise ValueError(f"mapping {self.mapping} is not a bijection on 1..{n}")

    @property
    def n(self) -> int:
        return len(self.mapping)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def reversal(cls, n: int) -> "Permutation":
        return cls(tuple(n + 1 - i for i in range(1, n + 1)))

    @classmethod
    def from_sequence(cls, seq: Sequence[int]) -> "Permutation":
        """Build from the permuted order of original indices.

        ``seq[j-1]`` is the original index now sitting at position j, e.g.
        (2, 1, 3) means the first two items swapped places.
        """
        n = len(seq)
        mapping = [0] * n
        for pos, orig in enumerate(seq, start=1):
            if not 1 <= orig <= n or mapping[orig - 1]:
                raise ValueError(f"{seq!r} is not a permutation of 1..{n}")
            mapping[orig - 1] = pos
        return cls(tuple(mapping))

    def sequence(self) -> tuple[int, ...]:
        """Original indices in their new order (inverse view of ``mapping``)."""
        seq = [0] * self.n
        for orig, pos in enumerate(self.mapping, start=1):
            seq[pos - 1] = orig
        return tuple(seq)

    def inverse(self) -> "Permutation":
        return Permutation(self.sequence())

    def new_position(self, original_index: int) -> int:
        return self.mapping[original_index - 1]

    def apply(self, items: Sequence) -> list:
        out = [None] * self.n
        for orig, item in enumerate(items, start=1):
            out[self.mapping[orig - 1] - 1] = item
        return out

    def compose(self, then: "Permutation") -> "Permutation":
        """The permutation equivalent to applying ``self`` first, ``then`` second."""
        return Permutation(tuple(then.mapping[p - 1] for p in self.mapping))

    def is_identity(self) -> bool:
        return all(p == i for i, p in enumerate(self.mapping, start=1))


@dataclass(frozen=True)
class Violation:
    """One structured validation diagnostic."""

    code: str
    message: str
    field: str | None = None
    severity: str = "error"

    def __str__(self) -> str:
        loc = f" [{self.field}]" if self.field else ""
        return f"{self.severity} {self.code}{loc}: {self.message}"


def validate_instance(inst: Instance, solution: Solution | None = None) -> list[Violation]:
    """Check every instance invariant; returns an empty list when valid.

    Pure: never mutates and never raises on invalid data. When ``solution``
    is given it is checked against the instance as well (original form, so
    forward step references count as violations).
    """
    out: list[Violation] = []
    n = inst.n
    if n < 1:
        out.append(Violation("NoPremises", "instance has no premises", "premises"))
    indices = [p.index for p in inst.premises]
    if indices != list(range(1, n + 1)):
        out.append(
            Violation(
                "NonContiguousPremiseIndex",
                f"premise indices {indices} are not 1..{n}",
                "premises",
            )
        )
    for p in inst.premises:
        if not p.text.strip():
            out.append(
                Violation("EmptyPremiseText", f"premise {p.index} has empty text", "premises")
            )
    if inst.label not in inst.label_set.values:
        out.append(
            Violation(
                "LabelNotInSet",
                f"label {inst.label!r} not in {inst.label_set.name} "
                f"set {list(inst.label_set.values)}",
                "label",
            )
        )
    if solution is not None:
        out.extend(validate_solution(solution, inst))
    return out


def validate_solution(
    solution: Solution,
    inst: Instance | None = None,
    *,
    require_topological: bool = True,
) -> list[Violation]:
    """Check solution invariants.

    ``require_topological`` enforces the original-form rule that steps only
    reference earlier steps; pass False for deliberately dependency-breaking
    variants (random step shuffles).
    """
    out: list[Violation] = []
    m = solution.m
    if m < 1:
        out.append(Violation("NoSteps", "solution has no steps", "steps"))
    ids = [s.id for s in solution.steps]
    if sorted(ids) != list(range(1, m + 1)):
        out.append(
            Violation("BadStepIds", f"step ids {ids} are not a permutation of 1..{m}", "steps")
        )
        return out
    seen: set[int] = set()
    for s in solution.steps:
        if s.id in s.steps_used:
            out.append(
                Violation("SelfDependency", f"step {s.id} lists itself as prerequisite", "steps")
            )
        for ref in sorted(s.steps_used):
            if not 1 <= ref <= m:
                out.append(
                    Violation(
                        "UnknownStepRef",
                        f"step {s.id} references missing step {ref}",
                        "steps",
                    )
                )
            elif require_topological and ref not in seen and ref != s.id:
                out.append(
                    Violation(
                        "ForwardStepRef",
                        f"step {s.id} references step {ref} before it appears",
                        "steps",
                    )
                )
        if inst is not None:
            for pref in sorted(s.premises_used):
                if not 1 <= pref <= inst.n:
                    out.append(
                        Violation(
                            "DanglingPremiseRef",
                            f"step {s.id} cites premise {pref} but instance has {inst.n}",
                            "steps",
                        )
                    )
        seen.add(s.id)
    return out
