"""
Step dependency DAGs: enumeration, TFI, and safe reordering
===========================================================

A step-by-step solution induces a DAG: an edge (i, j) says step j
consumes step i's result. Any topological order (linear extension) of
that DAG is an equally valid way to present the same reasoning, so
answer-order augmentation rewrites a solution along a different
extension. The Topological Flexibility Index, extensions / m!, measures
how much freedom a solution leaves: 1 means steps are fully independent,
1/m! means a single forced chain.
"""

from orderaug import (
    Permutation,
    Solution,
    Step,
    build_dag,
    enumerate_linear_extensions,
    remap_premise_refs,
    reorder_solution,
    sample_extension,
    substream,
    tfi_exact,
)


def step(sid, goal, premises=(), steps=()):
    lines = [f"Step {sid}: {goal}"]
    lines += [f"From premise {p}." for p in premises]
    lines += [f"Combine with step {s}." for s in steps]
    lines.append(f"So {goal.lower()} holds.")
    return Step(
        id=sid,
        goal=goal,
        premises_used=frozenset(premises),
        steps_used=frozenset(steps),
        result=f"So {goal.lower()} holds.",
        text="\n".join(lines),
    )


# steps 1 and 2 are independent leaves; 3 needs both; 4 closes the chain
solution = Solution(
    instance_id="demo",
    steps=(
        step(1, "Tom is an animal", premises=[1, 2]),
        step(2, "Plants are not animals", premises=[3]),
        step(3, "Tom is not a plant", steps=[1, 2]),
        step(4, "The conclusion follows", steps=[3]),
    ),
    final_answer="Final answer: True.",
)

dag = build_dag(solution)
print("edges:", dag.edges())

# enumerate every linear extension; the exact count never truncates even
# when the listing is capped
ext = enumerate_linear_extensions(dag)
print("extensions:", [tuple(o) for o in ext.orderings], "count:", ext.exact_count)
print("TFI:", tfi_exact(dag), "=", float(tfi_exact(dag)))

# pick one non-identity extension and rewrite the solution along it:
# steps are renumbered positionally and prose references follow suit
other = next(tuple(o) for o in ext.orderings if tuple(o) != (1, 2, 3, 4))
reordered = reorder_solution(solution, other)
print(f"\nreordered along {other}:")
for s in reordered.steps:
    print(" ", s.text.replace("\n", " / "))

# uniform sampling over extensions works off the exact counts, so both
# orders of this DAG appear ~50/50
rng = substream(0, "demo", "draws")
draws = [tuple(sample_extension(dag, rng).ordering) for _ in range(1000)]
print("\ndraw shares:", {o: draws.count(o) for o in set(draws)})

# if the premises were shuffled too, remap the numeric premise citations
perm = Permutation((2, 3, 1))
remapped = remap_premise_refs(reordered, perm)
print("\npremise refs after remap by", perm.mapping)
for s in remapped.steps:
    print(f"  step {s.id}: premises_used={sorted(s.premises_used)}")
