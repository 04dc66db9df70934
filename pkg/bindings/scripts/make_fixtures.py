"""Generate the shared parity fixtures for the Node bindings.

Inputs and expected outputs are computed with the core library's public
API (never through the stdio bridge), so the binding tests compare two
independent paths: core library here vs. bridge + TypeScript marshaling
there. Output is deterministic; rerunning never changes the files.

Usage: python3 scripts/make_fixtures.py [fixtures_dir]
"""

import json
import sys
from dataclasses import replace
from pathlib import Path

from orderaug import (
    BUILTIN_LABEL_SETS,
    DatasetRecord,
    Instance,
    Permutation,
    Premise,
    Solution,
    Step,
    emit_dataset,
    enumerate_linear_extensions,
    kendall_tau,
    kendall_tau_exact,
    record_to_json,
    remap_premise_refs,
    reorder_solution,
    shuffle_premises,
    substream,
    tfi,
    tfi_exact,
)
from orderaug.permute import TauBin
from orderaug.stepdag import DepDag, count_linear_extensions


def step(sid, goal, premises=(), steps=(), prose=None):
    lines = [f"Step {sid}: {goal}"]
    lines += prose or []
    lines += [f"From premise {p}." for p in premises]
    lines += [f"Using step {s}." for s in steps]
    lines.append(f"Hence {goal.lower()}.")
    return Step(
        id=sid,
        goal=goal,
        premises_used=frozenset(premises),
        steps_used=frozenset(steps),
        result=f"Hence {goal.lower()}.",
        text="\n".join(lines),
    )


def corpus_records():
    folio = BUILTIN_LABEL_SETS["FOLIO"]
    ruletaker = BUILTIN_LABEL_SETS["RuleTaker"]
    logicnli = BUILTIN_LABEL_SETS["LogicNLI"]

    cat = Instance(
        id="cat",
        premises=(
            Premise(1, "Tom is a cat.", "Cat(tom)"),
            Premise(2, "All cats are animals.", "∀x (Cat(x) → Animal(x))"),
            Premise(3, "Animals are not plants.", "∀x (Animal(x) → ¬Plant(x))"),
            Premise(4, "Jerry is a plant."),
        ),
        conclusion_text="Tom is not a plant.",
        conclusion_fol="¬Plant(tom)",
        label="True",
        label_set=folio,
    )
    cat_solution = Solution(
        instance_id="cat",
        steps=(
            step(1, "Tom is an animal", premises=[1, 2]),
            step(2, "Animals and plants are disjoint", premises=[3]),
            step(3, "Tom is not a plant", steps=[1, 2]),
        ),
        final_answer="Final answer: True",
    )

    quirks = Instance(
        id="quirks",
        premises=(
            Premise(1, 'Quote " backslash \\ and tab\there.'),
            Premise(2, "A premise with\nan embedded newline."),
            Premise(3, "日本語の前提。"),
        ),
        conclusion_text="Escaping survives the round trip ✓",
        label="not entailment",
        label_set=ruletaker,
    )

    wide = Instance(
        id="wide",
        premises=tuple(Premise(j, f"Fact number {j} stands alone.") for j in range(1, 7)),
        conclusion_text="All facts are independent.",
        label="neutral",
        label_set=logicnli,
    )
    wide_solution = Solution(
        instance_id="wide",
        steps=(
            step(1, "Collect fact 1", premises=[1]),
            step(2, "Collect fact 5", premises=[5]),
            step(3, "Join both facts", steps=[1, 2], prose=["Recall premise 6 as well."]),
        ),
        final_answer="Final answer: neutral",
    )

    lone = Instance(
        id="lone",
        premises=(Premise(1, "A single premise cannot be shuffled."),),
        conclusion_text="Order augmentation passes it through.",
        label="Unknown",
        label_set=folio,
    )

    return [
        DatasetRecord(instance=cat, solution=cat_solution),
        DatasetRecord(instance=quirks),
        DatasetRecord(instance=wide, solution=wide_solution),
        DatasetRecord(instance=lone),
    ]


def raw(result) -> str:
    # exactly how the bridge serializes its response line
    return json.dumps(result, ensure_ascii=False)


def solution_to_json(solution: Solution) -> dict:
    return {
        "steps": [
            {
                "id": s.id,
                "goal": s.goal,
                "premises_used": sorted(s.premises_used),
                "steps_used": sorted(s.steps_used),
                "result": s.result,
                "text": s.text,
            }
            for s in solution.steps
        ],
        "final_answer": solution.final_answer,
    }


def expected_shuffle(record: DatasetRecord, seed: int, k: int, mode: str) -> dict:
    rng = substream(seed, "conditions", record.instance.id)
    out = []
    for variant in shuffle_premises(record.instance, k, TauBin.parse(mode), rng):
        solution = record.solution
        if solution is not None and not variant.passthrough:
            solution = replace(
                remap_premise_refs(solution, variant.permutation),
                instance_id=variant.instance.id,
            )
        out.append(
            record_to_json(
                DatasetRecord(
                    instance=variant.instance,
                    solution=solution,
                    lineage="condition_shuffled",
                    source_id=record.instance.id,
                    permutation=variant.permutation,
                )
            )
        )
    return {"records": out}


def dag_from(deps: dict) -> DepDag:
    parsed = {int(k): frozenset(v) for k, v in deps.items()}
    return DepDag(node_ids=frozenset(parsed), deps=parsed)


def expected_extensions(deps: dict, cap: int | None) -> dict:
    ext = enumerate_linear_extensions(dag_from(deps), **({"cap": cap} if cap else {}))
    return {
        "orderings": [list(o) for o in ext.orderings],
        "exact_count": ext.exact_count,
        "truncated": ext.truncated,
    }


def expected_tfi(deps: dict) -> dict:
    dag = dag_from(deps)
    exact = tfi_exact(dag)
    return {
        "tfi": tfi(dag),
        "extensions": count_linear_extensions(dag),
        "exact": f"{exact.numerator}/{exact.denominator}",
    }


def expected_tau(sequence: list) -> dict:
    perm = Permutation(tuple(sequence))
    exact = kendall_tau_exact(perm)
    return {"tau": kendall_tau(perm), "exact": f"{exact.numerator}/{exact.denominator}"}


def expected_reorder(solution_json: dict, ordering: list, instance_id: str) -> dict:
    solution = Solution(
        instance_id=instance_id,
        steps=tuple(
            Step(
                id=s["id"],
                goal=s["goal"],
                premises_used=frozenset(s["premises_used"]),
                steps_used=frozenset(s["steps_used"]),
                result=s["result"],
                text=s["text"],
            )
            for s in solution_json["steps"]
        ),
        final_answer=solution_json["final_answer"],
    )
    return {"solution": solution_to_json(reorder_solution(solution, ordering))}


def main() -> None:
    out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
    out_dir.mkdir(parents=True, exist_ok=True)

    records = corpus_records()
    emit_dataset(records, out_dir / "corpus.jsonl")
    by_id = {r.instance.id: r for r in records}

    reference_deps = {"1": [], "2": [], "3": [1, 2], "4": [3]}
    diamond_deps = {"1": [], "2": [1], "3": [1], "4": [2, 3]}
    edgeless_deps = {str(i): [] for i in range(1, 5)}
    chain_deps = {str(i): [i - 1] if i > 1 else [] for i in range(1, 6)}

    cat_solution_json = record_to_json(by_id["cat"])["solution"]
    wide_solution_json = record_to_json(by_id["wide"])["solution"]

    cases = []

    def case(name, op, payload, result):
        cases.append({"name": name, "op": op, "payload": payload, "raw": raw(result)})

    case("tau identity", "kendall-tau", {"sequence": [1, 2, 3, 4]},
         expected_tau([1, 2, 3, 4]))
    case("tau reversal", "kendall-tau", {"sequence": [6, 5, 4, 3, 2, 1]},
         expected_tau([6, 5, 4, 3, 2, 1]))
    case("tau one swap", "kendall-tau", {"sequence": [2, 1, 3, 4]},
         expected_tau([2, 1, 3, 4]))
    case("tau mixed n=10", "kendall-tau",
         {"sequence": [3, 1, 4, 10, 5, 9, 2, 6, 8, 7]},
         expected_tau([3, 1, 4, 10, 5, 9, 2, 6, 8, 7]))

    case("tfi reference dag", "tfi", {"deps": reference_deps},
         expected_tfi(reference_deps))
    case("tfi edgeless", "tfi", {"deps": edgeless_deps}, expected_tfi(edgeless_deps))
    case("tfi chain", "tfi", {"deps": chain_deps}, expected_tfi(chain_deps))

    case("extensions reference dag", "enumerate-extensions",
         {"deps": reference_deps}, expected_extensions(reference_deps, None))
    case("extensions diamond", "enumerate-extensions",
         {"deps": diamond_deps}, expected_extensions(diamond_deps, None))
    case("extensions capped", "enumerate-extensions",
         {"deps": edgeless_deps, "cap": 10}, expected_extensions(edgeless_deps, 10))

    case("shuffle cat k=3 random", "shuffle-premises",
         {"record": record_to_json(by_id["cat"]), "seed": 7, "k": 3, "mode": "random"},
         expected_shuffle(by_id["cat"], 7, 3, "random"))
    case("shuffle cat binned", "shuffle-premises",
         {"record": record_to_json(by_id["cat"]), "seed": 11, "k": 2,
          "mode": "[-0.4,-0.2)"},
         expected_shuffle(by_id["cat"], 11, 2, "[-0.4,-0.2)"))
    case("shuffle unicode quirks", "shuffle-premises",
         {"record": record_to_json(by_id["quirks"]), "seed": 3, "k": 2,
          "mode": "random"},
         expected_shuffle(by_id["quirks"], 3, 2, "random"))
    case("shuffle single premise passthrough", "shuffle-premises",
         {"record": record_to_json(by_id["lone"]), "seed": 1, "k": 2,
          "mode": "random"},
         expected_shuffle(by_id["lone"], 1, 2, "random"))

    case("reorder cat solution", "reorder-solution",
         {"solution": cat_solution_json, "ordering": [2, 1, 3],
          "instance_id": "cat"},
         expected_reorder(cat_solution_json, [2, 1, 3], "cat"))
    case("reorder wide solution", "reorder-solution",
         {"solution": wide_solution_json, "ordering": [2, 1, 3],
          "instance_id": "wide"},
         expected_reorder(wide_solution_json, [2, 1, 3], "wide"))

    errors = [
        {
            "name": "unreachable bin for n=2",
            "op": "shuffle-premises",
            "payload": {
                "record": record_to_json(
                    DatasetRecord(
                        instance=Instance(
                            id="pair",
                            premises=(
                                Premise(1, "First premise."),
                                Premise(2, "Second premise."),
                            ),
                            conclusion_text="Two premises only.",
                            label="True",
                            label_set=BUILTIN_LABEL_SETS["FOLIO"],
                        )
                    )
                ),
                "seed": 5,
                "k": 1,
                "mode": "[0.0,0.2)",
            },
            "code": "BinUnreachable",
        },
        {
            "name": "cyclic dependency graph",
            "op": "tfi",
            "payload": {"deps": {"1": [2], "2": [1]}},
            "code": "CyclicDependency",
        },
    ]

    (out_dir / "expected.json").write_text(
        json.dumps({"cases": cases, "errors": errors}, ensure_ascii=False, indent=2)
        + "\n",
        encoding="utf-8",
    )
    print(f"wrote {out_dir / 'corpus.jsonl'} and {len(cases)} cases, "
          f"{len(errors)} error cases")


if __name__ == "__main__":
    main()
