import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from orderaug.ingest import DatasetRecord, record_to_json
from orderaug.model import (
    BUILTIN_LABEL_SETS,
    Instance,
    Premise,
    Solution,
    Step,
)

# The dependency listing shown in the extraction prompt's worked example,
# and the step DAG it induces.
FIXTURE_LISTING = """step 1: condition 1, condition 2
step 2: condition 5
step 3: step 1, step 2
step 4: step 3"""

FIXTURE_DEPS = {1: frozenset(), 2: frozenset(), 3: frozenset({1, 2}), 4: frozenset({3})}
FIXTURE_EDGES = [(1, 3), (2, 3), (3, 4)]


def make_instance(
    iid: str = "i1",
    n: int = 4,
    label: str = "True",
    label_set: str = "FOLIO",
    with_fol: bool = False,
) -> Instance:
    premises = tuple(
        Premise(
            index=j,
            text=f"Premise {j} of {iid}.",
            fol=f"P{j}({iid})" if with_fol else None,
        )
        for j in range(1, n + 1)
    )
    return Instance(
        id=iid,
        premises=premises,
        conclusion_text=f"Conclusion of {iid}.",
        conclusion_fol=f"C({iid})" if with_fol else None,
        label=label,
        label_set=BUILTIN_LABEL_SETS[label_set],
    )


def make_solution(iid: str = "i1", deps: dict | None = None, premises: dict | None = None) -> Solution:
    """Solution whose steps_used follow ``deps`` (defaults to the fixture DAG)."""
    deps = FIXTURE_DEPS if deps is None else deps
    premises = premises or {1: {1, 2}, 2: {3}}
    steps = []
    for sid in sorted(deps):
        used = sorted(deps[sid])
        cited = sorted(premises.get(sid, ()))
        lines = [f"Step {sid}: work on goal {sid}"]
        lines += [f"Building on step {d}." for d in used]
        lines += [f"Using premise {p}." for p in cited]
        lines.append(f"result of step {sid}")
        steps.append(
            Step(
                id=sid,
                goal=f"work on goal {sid}",
                premises_used=frozenset(cited),
                steps_used=frozenset(used),
                result=f"result of step {sid}",
                text="\n".join(lines),
            )
        )
    return Solution(instance_id=iid, steps=tuple(steps), final_answer="The conclusion is True.")


def write_dataset(path: Path, records) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record_to_json(record), ensure_ascii=False) + "\n")
    return path


@pytest.fixture
def fixture_solution() -> Solution:
    return make_solution()


@pytest.fixture
def small_corpus(tmp_path: Path) -> Path:
    records = []
    for i in range(6):
        iid = f"inst{i}"
        inst = make_instance(iid, n=3 + (i % 3), label=("True", "False", "Unknown")[i % 3])
        records.append(DatasetRecord(instance=inst, solution=make_solution(iid)))
    return write_dataset(tmp_path / "corpus.jsonl", records)
