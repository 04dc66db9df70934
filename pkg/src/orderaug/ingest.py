"""Dataset ingestion and emission.

Everything downstream works on one canonical JSONL schema; per-format
adapters normalize FOLIO-, RuleTaker-, and LogicNLI-style records at the
boundary. Field order in emitted records is fixed, so emission is
byte-stable for a fixed input and configuration.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator, Mapping

from .errors import OrderAugError
from .model import (
    BUILTIN_LABEL_SETS,
    LINEAGES,
    Instance,
    LabelSet,
    Permutation,
    Premise,
    Solution,
    Step,
    Violation,
    canonicalize_label,
    validate_instance,
    validate_solution,
)

__all__ = [
    "DatasetRecord",
    "DatasetFile",
    "TrainingRecord",
    "MalformedJson",
    "SchemaViolation",
    "UnknownFormat",
    "MissingSolution",
    "ValidationFailed",
    "record_violations",
    "FORMATS",
    "DEFAULT_PROMPT_TEMPLATE",
    "parse_dataset",
    "scan_dataset",
    "iter_records",
    "record_to_json",
    "record_from_json",
    "emit_dataset",
    "emit_training_records",
    "render_prompt",
    "render_solution_text",
]

FORMATS = ("generic", "folio", "ruletaker", "logicnli")


class MalformedJson(OrderAugError):
    code = "MalformedJson"

    def __init__(self, line: int, detail: str):
        self.line = line
        super().__init__(f"line {line}: {detail}")


class SchemaViolation(OrderAugError):
    code = "SchemaViolation"

    def __init__(self, line: int, field_name: str, detail: str):
        self.line = line
        self.field = field_name
        super().__init__(f"line {line}, field {field_name!r}: {detail}")


class UnknownFormat(OrderAugError):
    code = "UnknownFormat"


class MissingSolution(OrderAugError):
    code = "MissingSolution"

    def __init__(self, instance_id: str):
        self.instance_id = instance_id
        super().__init__(f"no solution available for instance {instance_id}")


class ValidationFailed(OrderAugError):
    code = "ValidationFailed"

    def __init__(self, line: int, violations):
        self.line = line
        self.violations = list(violations)
        summary = "; ".join(str(v) for v in self.violations)
        super().__init__(f"line {line}: {summary}")


@dataclass(frozen=True)
class DatasetRecord:
    """One canonical record: an instance, its optional solution, and lineage."""

    instance: Instance
    solution: Solution | None = None
    lineage: str = "original"
    source_id: str | None = None
    permutation: Permutation | None = None


@dataclass(frozen=True)
class DatasetFile:
    """A JSONL dataset on disk plus the adapter needed to read it."""

    path: Path
    format: str = "generic"

    def __post_init__(self):
        if self.format not in FORMATS:
            raise UnknownFormat(f"format {self.format!r}; known: {', '.join(FORMATS)}")

    def lines(self) -> Iterator[tuple[int, str]]:
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if line.strip():
                    yield lineno, line


def _step_from_json(obj: Mapping[str, Any]) -> Step:
    return Step(
        id=int(obj["id"]),
        goal=str(obj.get("goal", "")),
        premises_used=frozenset(int(i) for i in obj.get("premises_used", [])),
        steps_used=frozenset(int(i) for i in obj.get("steps_used", [])),
        result=str(obj.get("result", "")),
        text=str(obj.get("text", "")),
    )


def _solution_from_json(obj: Mapping[str, Any], instance_id: str) -> Solution:
    return Solution(
        instance_id=instance_id,
        steps=tuple(_step_from_json(s) for s in obj["steps"]),
        final_answer=str(obj.get("final_answer", "")),
    )


def record_from_json(
    obj: Mapping[str, Any],
    label_sets: Mapping[str, LabelSet] | None = None,
    line: int = 0,
) -> DatasetRecord:
    """Decode one canonical-schema object into a DatasetRecord."""
    label_sets = label_sets or BUILTIN_LABEL_SETS
    try:
        set_name = str(obj["label_set"])
        if set_name not in label_sets:
            raise SchemaViolation(line, "label_set", f"unknown label set {set_name!r}")
        premises_fol = obj.get("premises_fol")
        premises = []
        for i, text in enumerate(obj["premises"], start=1):
            fol = None
            if premises_fol is not None and i <= len(premises_fol):
                fol = premises_fol[i - 1]
            premises.append(Premise(index=i, text=str(text), fol=fol))
        inst = Instance(
            id=str(obj["id"]),
            premises=tuple(premises),
            conclusion_text=str(obj["conclusion"]),
            conclusion_fol=obj.get("conclusion_fol"),
            label=canonicalize_label(str(obj["label"])),
            label_set=label_sets[set_name],
        )
        solution = None
        if obj.get("solution") is not None:
            solution = _solution_from_json(obj["solution"], inst.id)
        lineage = str(obj.get("lineage", "original"))
        if lineage not in LINEAGES:
            raise SchemaViolation(line, "lineage", f"unknown lineage {lineage!r}")
        permutation = None
        if obj.get("permutation") is not None:
            permutation = Permutation(tuple(int(i) for i in obj["permutation"]))
        return DatasetRecord(
            instance=inst,
            solution=solution,
            lineage=lineage,
            source_id=obj.get("source_id"),
            permutation=permutation,
        )
    except SchemaViolation:
        raise
    except KeyError as err:
        raise SchemaViolation(line, str(err.args[0]), "required field missing") from err
    except (TypeError, ValueError) as err:
        raise SchemaViolation(line, "-", str(err)) from err


def record_to_json(record: DatasetRecord) -> dict[str, Any]:
    """Encode a record in the canonical schema's fixed field order."""
    inst = record.instance
    fols = [p.fol for p in inst.premises]
    solution = None
    if record.solution is not None:
        solution = {
            "steps": [
                {
                    "id": s.id,
                    "goal": s.goal,
                    "premises_used": sorted(s.premises_used),
                    "steps_used": sorted(s.steps_used),
                    "result": s.result,
                    "text": s.text,
                }
                for s in record.solution.steps
            ],
            "final_answer": record.solution.final_answer,
        }
    return {
        "id": inst.id,
        "premises": [p.text for p in inst.premises],
        "premises_fol": fols if any(f is not None for f in fols) else None,
        "conclusion": inst.conclusion_text,
        "conclusion_fol": inst.conclusion_fol,
        "label": inst.label,
        "label_set": inst.label_set.name,
        "solution": solution,
        "lineage": record.lineage,
        "source_id": record.source_id,
        "permutation": list(record.permutation.mapping) if record.permutation else None,
    }


def record_violations(record: DatasetRecord) -> list[Violation]:
    """Every invariant violation for one record.

    Lineage-aware: random step shuffles intentionally break topological
    order, so forward step references are not flagged for them.
    """
    out = validate_instance(record.instance)
    if record.solution is not None:
        topological = record.lineage != "random_steps_shuffled"
        out.extend(
            validate_solution(
                record.solution, record.instance, require_topological=topological
            )
        )
    if record.permutation is not None and record.permutation.n != record.instance.n:
        out.append(
            Violation(
                "PermutationLengthMismatch",
                f"permutation covers {record.permutation.n} positions, "
                f"instance has {record.instance.n} premises",
                "permutation",
            )
        )
    return out


# ---------------------------------------------------------------------------
# Format adapters: map native dataset fields onto the canonical schema.


def _first_key(obj: Mapping[str, Any], keys: Iterable[str], line: int, what: str) -> Any:
    for key in keys:
        if key in obj:
            return obj[key]
    raise SchemaViolation(line, what, f"none of {list(keys)} present")


def _as_sentence_list(value: Any) -> list[str]:
    if isinstance(value, list):
        return [str(v).strip() for v in value if str(v).strip()]
    text = str(value)
    if "\n" in text:
        parts = text.splitlines()
    else:
        # single-string contexts: split on sentence ends, keep the period
        parts = re.split(r"(?<=[.!?])\s+", text)
    return [p.strip() for p in parts if p.strip()]


def _adapt_folio(obj: Mapping[str, Any], line: int) -> dict[str, Any]:
    premises = _as_sentence_list(_first_key(obj, ("premises", "context"), line, "premises"))
    fol_raw = obj.get("premises-FOL", obj.get("premises_fol"))
    fols = _as_sentence_list(fol_raw) if fol_raw is not None else None
    label = canonicalize_label(str(_first_key(obj, ("label", "answer"), line, "label")))
    label = {"Uncertain": "Unknown"}.get(label, label)
    return {
        "id": str(_first_key(obj, ("id", "example_id", "story_id"), line, "id")),
        "premises": premises,
        "premises_fol": fols,
        "conclusion": str(_first_key(obj, ("conclusion", "hypothesis"), line, "conclusion")),
        "conclusion_fol": obj.get("conclusion-FOL", obj.get("conclusion_fol")),
        "label": label,
        "label_set": "FOLIO",
        "solution": obj.get("solution"),
    }


def _adapt_ruletaker(obj: Mapping[str, Any], line: int) -> dict[str, Any]:
    premises = _as_sentence_list(
        _first_key(obj, ("premises", "context", "theory"), line, "premises")
    )
    raw = _first_key(obj, ("label", "answer"), line, "label")
    if isinstance(raw, bool):
        label = "entailment" if raw else "not entailment"
    else:
        label = {"true": "entailment", "false": "not entailment"}.get(
            canonicalize_label(str(raw)).lower(), canonicalize_label(str(raw))
        )
    return {
        "id": str(_first_key(obj, ("id", "example_id"), line, "id")),
        "premises": premises,
        "premises_fol": None,
        "conclusion": str(
            _first_key(obj, ("conclusion", "question", "hypothesis"), line, "conclusion")
        ),
        "conclusion_fol": None,
        "label": label,
        "label_set": "RuleTaker",
        "solution": obj.get("solution"),
    }


def _adapt_logicnli(obj: Mapping[str, Any], line: int) -> dict[str, Any]:
    premises = _as_sentence_list(_first_key(obj, ("premises", "premise"), line, "premises"))
    return {
        "id": str(_first_key(obj, ("id", "example_id"), line, "id")),
        "premises": premises,
        "premises_fol": None,
        "conclusion": str(_first_key(obj, ("conclusion", "hypothesis"), line, "conclusion")),
        "conclusion_fol": None,
        "label": canonicalize_label(str(_first_key(obj, ("label",), line, "label"))),
        "label_set": "LogicNLI",
        "solution": obj.get("solution"),
    }


_ADAPTERS: dict[str, Callable[[Mapping[str, Any], int], dict[str, Any]]] = {
    "generic": lambda obj, line: dict(obj),
    "folio": _adapt_folio,
    "ruletaker": _adapt_ruletaker,
    "logicnli": _adapt_logicnli,
}


def iter_records(
    file: DatasetFile,
    label_sets: Mapping[str, LabelSet] | None = None,
    on_error: str = "fail",
) -> Iterator[DatasetRecord]:
    """Stream validated records off disk.

    ``on_error="fail"`` raises on the first bad record (default: lineage must
    stay traceable); ``"skip"`` drops bad records after noting line numbers.
    """
    if on_error not in ("fail", "skip"):
        raise ValueError(f"on_error must be 'fail' or 'skip', got {on_error!r}")
    adapter = _ADAPTERS[file.format]
    for lineno, line in file.lines():
        try:
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as err:
                raise MalformedJson(lineno, err.msg) from err
            if not isinstance(obj, dict):
                raise MalformedJson(lineno, "line is not a JSON object")
            record = record_from_json(adapter(obj, lineno), label_sets, lineno)
            violations = [v for v in record_violations(record) if v.severity == "error"]
            if violations:
                raise ValidationFailed(lineno, violations)
        except OrderAugError:
            if on_error == "fail":
                raise
            continue
        yield record


def parse_dataset(
    file: DatasetFile,
    label_sets: Mapping[str, LabelSet] | None = None,
    on_error: str = "fail",
) -> list[DatasetRecord]:
    """Parse a whole dataset file into validated records."""
    return list(iter_records(file, label_sets, on_error))


def scan_dataset(
    file: DatasetFile,
    label_sets: Mapping[str, LabelSet] | None = None,
) -> Iterator[tuple[int, DatasetRecord | None, OrderAugError | None]]:
    """Walk a dataset reporting every record's outcome, never raising.

    Yields (line number, record or None, error or None); unlike
    ``iter_records`` this keeps going past bad lines so callers can list
    every problem in one pass.
    """
    adapter = _ADAPTERS[file.format]
    for lineno, line in file.lines():
        try:
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as err:
                raise MalformedJson(lineno, err.msg) from err
            if not isinstance(obj, dict):
                raise MalformedJson(lineno, "line is not a JSON object")
            record = record_from_json(adapter(obj, lineno), label_sets, lineno)
            violations = [v for v in record_violations(record) if v.severity == "error"]
            if violations:
                raise ValidationFailed(lineno, violations)
        except OrderAugError as err:
            yield lineno, None, err
            continue
        yield lineno, record, None


def emit_dataset(records: Iterable[DatasetRecord], out_path: Path | str) -> int:
    """Write records as canonical JSONL; returns the number written.

    Output is deterministic: fixed field order, no ASCII escaping, one
    record per line in input order.
    """
    count = 0
    out_path = Path(out_path)
    if out_path.parent != Path(""):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record_to_json(record), ensure_ascii=False))
            fh.write("\n")
            count += 1
    return count


# ---------------------------------------------------------------------------
# Training-record rendering.

DEFAULT_PROMPT_TEMPLATE = (
    "Premises:\n{premises}\n"
    "Hypothesis:\n{conclusion}\n"
    "Determine whether the hypothesis is {label_choices} based on the premises."
)

# Lineages whose response must be a full chain-of-thought solution.
_COT_LINEAGES = {
    "answer_steps_shuffled",
    "condition_and_answer_shuffled",
    "random_steps_shuffled",
}


@dataclass(frozen=True)
class TrainingRecord:
    """One prompt/response pair ready for supervised fine-tuning."""

    prompt: str
    response: str
    meta: dict[str, Any] = field(default_factory=dict)


def _label_choices(label_set: LabelSet) -> str:
    values = list(label_set.values)
    if len(values) == 1:
        return values[0]
    return ", ".join(values[:-1]) + " or " + values[-1]


def render_prompt(inst: Instance, template: str = DEFAULT_PROMPT_TEMPLATE) -> str:
    premises = "\n".join(f"{p.index}. {p.text}" for p in inst.premises)
    return template.format(
        premises=premises,
        conclusion=inst.conclusion_text,
        label_choices=_label_choices(inst.label_set),
    )


def render_solution_text(solution: Solution) -> str:
    return "\n\n".join([*(s.text for s in solution.steps), solution.final_answer])


def emit_training_records(
    records: Iterable[DatasetRecord],
    template: str = DEFAULT_PROMPT_TEMPLATE,
) -> list[TrainingRecord]:
    """Render records into prompt/response pairs.

    The response is the label alone unless the record carries a solution (or
    its lineage demands one), in which case the full renumbered step-by-step
    text is used.
    """
    out = []
    for record in records:
        inst = record.instance
        if record.solution is None and record.lineage in _COT_LINEAGES:
            raise MissingSolution(inst.id)
        if record.solution is not None:
            response = render_solution_text(record.solution)
        else:
            response = inst.label
        out.append(
            TrainingRecord(
                prompt=render_prompt(inst, template),
                response=response,
                meta={
                    "instance_id": inst.id,
                    "lineage": record.lineage,
                    "source_id": record.source_id,
                },
            )
        )
    return out
