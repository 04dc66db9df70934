"""
The command line, end to end: augment, analyze, validate
========================================================

Everything the library does is reachable through the `orderaug` CLI.
This script builds a four-instance corpus on disk, produces a combined
augmentation (step reordering first, then premise shuffling with
remapped references), inspects the tau histogram, and runs the
self-consistency validator over the output. `run(argv)` is the same
entry point `python -m orderaug` uses, so the demo stays in-process.
"""

import json
import tempfile
from pathlib import Path

from orderaug import (
    BUILTIN_LABEL_SETS,
    DatasetFile,
    DatasetRecord,
    Instance,
    Premise,
    Solution,
    Step,
    emit_dataset,
    parse_dataset,
)
from orderaug.cli import run


def build_record(iid: str, n: int) -> DatasetRecord:
    premises = tuple(Premise(j, f"Premise {j} of {iid}.") for j in range(1, n + 1))
    inst = Instance(
        id=iid,
        premises=premises,
        conclusion_text=f"Conclusion of {iid}.",
        label="True",
        label_set=BUILTIN_LABEL_SETS["FOLIO"],
    )
    # three independent opening steps, then a join: 3! = 6 extensions,
    # so `--k 2` below can pick two distinct non-identity reorderings
    steps = []
    for sid, used in ((1, ()), (2, ()), (3, ()), (4, (1, 2, 3))):
        lines = [f"Step {sid}: derive fact {sid}"]
        lines += [f"Using premise {min(sid, n)}."]
        lines += [f"With step {d}." for d in used]
        lines.append(f"Fact {sid} established.")
        steps.append(
            Step(
                id=sid,
                goal=f"derive fact {sid}",
                premises_used=frozenset({min(sid, n)}),
                steps_used=frozenset(used),
                result=f"Fact {sid} established.",
                text="\n".join(lines),
            )
        )
    solution = Solution(iid, tuple(steps), "Final answer: True.")
    return DatasetRecord(instance=inst, solution=solution)


workdir = Path(tempfile.mkdtemp(prefix="orderaug-demo-"))
corpus = workdir / "corpus.jsonl"
emit_dataset([build_record(f"inst{i}", n=3 + i % 2) for i in range(4)], corpus)
print("corpus:", corpus, f"({corpus.stat().st_size} bytes)")

# combined augmentation: every output record carries both a premise
# permutation and a dependency-safe step reordering
augmented = workdir / "augmented.jsonl"
code = run([
    "--seed", "7",
    "augment", "combined",
    "--input", str(corpus),
    "--output", str(augmented),
    "--k", "2",
])
print("augment combined ->", code)
for record in parse_dataset(DatasetFile(augmented)):
    print(f"  {record.instance.id}: lineage={record.lineage} "
          f"perm={record.permutation.mapping} steps="
          f"{[s.goal for s in record.solution.steps]}")

# the analyzer reports record counts and the tau histogram as JSON
report = workdir / "tau.json"
run(["analyze", "tau", "--input", str(augmented), "--output", str(report)])
payload = json.loads(report.read_text())
print("\ntau histogram:", payload["tau"]["histogram"])

# every emitted record must pass the dataset validator (exit 0)
code = run(["validate", "dataset", "--input", str(augmented)])
print("validate dataset ->", code)
