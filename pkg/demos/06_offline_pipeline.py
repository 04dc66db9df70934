"""
Solution generation against a file-backed mock endpoint
=======================================================

Corpora that ship without step-by-step solutions go through a
three-stage pipeline: FOL conversion (when annotations are missing),
chain-of-thought solution generation, then dependency extraction. Each
stage is one chat completion. For offline work and tests, a `mock:`
endpoint replays canned responses from a JSON file keyed by the SHA-256
of the exact prompt, and a journal file makes the run resumable: a
second invocation re-sends nothing.
"""

import json
import tempfile
from pathlib import Path

from orderaug import (
    BUILTIN_LABEL_SETS,
    DatasetRecord,
    EndpointConfig,
    Instance,
    Premise,
    PromptTemplate,
    build_dag,
    prompt_key,
    read_journal,
    run_pipeline,
)
from orderaug.prompts import dependency_inputs, solution_inputs

FOLIO = BUILTIN_LABEL_SETS["FOLIO"]

SOLUTION_TEXT = """Step 1: Tom is a cat.
From premise 1, Tom is a cat.

Step 2: Tom is an animal.
Combining step 1 with premise 2, Tom is an animal.

Final answer: True"""

LISTING_TEXT = "step 1: condition 1\nstep 2: condition 2, step 1"


def instance(iid: str) -> Instance:
    return Instance(
        id=iid,
        premises=(
            Premise(1, "Tom is a cat.", "Cat(tom)"),
            Premise(2, "All cats are animals.", "∀x (Cat(x) → Animal(x))"),
        ),
        conclusion_text="Tom is an animal.",
        conclusion_fol="Animal(tom)",
        label="True",
        label_set=FOLIO,
    )


workdir = Path(tempfile.mkdtemp(prefix="orderaug-demo-"))
instances = [instance(f"inst{i}") for i in range(3)]

# script the mock: one canned response per prompt the pipeline will send
# (premises already carry FOL, so stage one is skipped)
responses = {}
for inst in instances:
    tpl = PromptTemplate.for_stage("solution_generation", inst.label_set)
    responses[prompt_key(tpl.render(**solution_inputs(inst)))] = SOLUTION_TEXT
    tpl = PromptTemplate.for_stage("dependency_extraction")
    responses[prompt_key(tpl.render(**dependency_inputs(inst, SOLUTION_TEXT)))] = LISTING_TEXT
mock = workdir / "mock.json"
mock.write_text(json.dumps(responses, ensure_ascii=False), encoding="utf-8")

# first run: every instance goes through stages two and three
journal = workdir / "journal.jsonl"
cfg = EndpointConfig(base_url=f"mock:{mock}")
records = [DatasetRecord(instance=i) for i in instances]
result = run_pipeline(records, cfg, journal)
print("first run: ", result)

# the journal now holds one completed record per instance, and the
# extracted dependency structure builds a valid DAG
for iid, entry in sorted(read_journal(journal).items()):
    dag = build_dag(entry.record.solution)
    print(f"  {iid}: status={entry.status} edges={dag.edges()}")

# second run: everything is journaled, nothing is re-sent (the mock
# logs each lookup to mock.json.log, so the log length is the proof)
requests_before = len(mock.with_suffix(".json.log").read_text().splitlines())
result = run_pipeline(records, cfg, journal)
requests_after = len(mock.with_suffix(".json.log").read_text().splitlines())
print("second run:", result)
print(f"endpoint requests during resume: {requests_after - requests_before}")
