"""Step-dependency DAGs: construction, linear extensions, TFI, reordering.

A solution's steps form a DAG whose edge (i, j) says step j consumes the
result of step i. Every ordering of the steps that respects all edges (a
linear extension) is an equally valid solution; this module enumerates,
counts, and samples those orderings and rewrites solutions into them.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from random import Random
from typing import Iterable, Mapping, Sequence

from .errors import OrderAugError
from .model import Permutation, Solution, Step

__all__ = [
    "DepDag",
    "ExtensionSet",
    "DrawnExtension",
    "TfiReport",
    "CyclicDependency",
    "SelfDependency",
    "UnknownStepRef",
    "TooLarge",
    "TooShort",
    "InvalidExtension",
    "DanglingPremiseRef",
    "build_dag",
    "enumerate_linear_extensions",
    "count_linear_extensions",
    "tfi",
    "tfi_exact",
    "sample_extension",
    "reorder_solution",
    "random_step_shuffle",
    "remap_premise_refs",
    "tfi_report",
    "rewrite_numbered_refs",
    "UNIFORM_SAMPLING_LIMIT",
    "COUNT_LIMIT",
]

# Exact enumeration / uniform sampling is guaranteed up to this many steps.
UNIFORM_SAMPLING_LIMIT = 12
# Hard ceiling for exact counting; the recursion is exponential in the worst case.
COUNT_LIMIT = 20


class CyclicDependency(OrderAugError):
    code = "CyclicDependency"

    def __init__(self, cycle: Sequence[int]):
        self.cycle = tuple(cycle)
        super().__init__("dependency cycle: " + " -> ".join(str(i) for i in self.cycle))


class SelfDependency(OrderAugError):
    code = "SelfDependency"

    def __init__(self, step_id: int):
        self.step_id = step_id
        super().__init__(f"step {step_id} depends on itself")


class UnknownStepRef(OrderAugError):
    code = "UnknownStepRef"

    def __init__(self, step_id: int, ref: int):
        self.step_id = step_id
        self.ref = ref
        super().__init__(f"step {step_id} references unknown step {ref}")


class TooLarge(OrderAugError):
    code = "TooLarge"


class TooShort(OrderAugError):
    code = "TooShort"


class InvalidExtension(OrderAugError):
    code = "InvalidExtension"


class DanglingPremiseRef(OrderAugError):
    code = "DanglingPremiseRef"

    def __init__(self, step_id: int, index: int):
        self.step_id = step_id
        self.index = index
        super().__init__(f"step {step_id} cites premise {index} after remap bounds")


@dataclass(frozen=True)
class DepDag:
    """Immutable dependency DAG over step ids.

    ``deps[j]`` is the set of prerequisite step ids of j, i.e. the edge
    (i, j) is stored as ``i in deps[j]``. Acyclicity is verified at
    construction.
    """

    node_ids: frozenset[int]
    deps: Mapping[int, frozenset[int]]

    def __post_init__(self):
        normalized = {j: frozenset(self.deps.get(j, ())) for j in self.node_ids}
        for j in self.deps:
            if j not in self.node_ids:
                raise UnknownStepRef(j, j)
        object.__setattr__(self, "deps", normalized)
        for j, prereqs in self.deps.items():
            if j in prereqs:
                raise SelfDependency(j)
            for i in prereqs:
                if i not in self.node_ids:
                    raise UnknownStepRef(j, i)
        cycle = _find_cycle(self.node_ids, self.deps)
        if cycle:
            raise CyclicDependency(cycle)

    @classmethod
    def from_deps(cls, deps: Mapping[int, Iterable[int]]) -> "DepDag":
        nodes = frozenset(deps)
        return cls(nodes, {j: frozenset(prereqs) for j, prereqs in deps.items()})

    @property
    def m(self) -> int:
        return len(self.node_ids)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((i, j) for j, prereqs in self.deps.items() for i in prereqs)

    def respects(self, ordering: Sequence[int]) -> bool:
        """True when ``ordering`` is a linear extension of this DAG."""
        if sorted(ordering) != sorted(self.node_ids):
            return False
        pos = {node: idx for idx, node in enumerate(ordering)}
        return all(pos[i] < pos[j] for i, j in self.edges())


def _find_cycle(nodes: frozenset[int], deps: Mapping[int, frozenset[int]]) -> list[int]:
    """Return one dependency cycle as a node path, or [] if acyclic."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {v: WHITE for v in nodes}
    stack: list[int] = []

    def visit(v: int) -> list[int]:
        color[v] = GREY
        stack.append(v)
        for u in sorted(deps.get(v, ())):
            if color[u] == GREY:
                return stack[stack.index(u):] + [u]
            if color[u] == WHITE:
                found = visit(u)
                if found:
                    return found
        stack.pop()
        color[v] = BLACK
        return []

    for v in sorted(nodes):
        if color[v] == WHITE:
            found = visit(v)
            if found:
                return found
    return []


def build_dag(solution: Solution) -> DepDag:
    """Read each step's prerequisite set into a DepDag, rejecting bad references."""
    ids = frozenset(s.id for s in solution.steps)
    deps: dict[int, frozenset[int]] = {}
    for s in solution.steps:
        if s.id in s.steps_used:
            raise SelfDependency(s.id)
        for ref in sorted(s.steps_used):
            if ref not in ids:
                raise UnknownStepRef(s.id, ref)
        deps[s.id] = frozenset(s.steps_used)
    return DepDag(ids, deps)


@dataclass(frozen=True)
class ExtensionSet:
    """Linear extensions of a DAG, possibly truncated at an enumeration cap.

    ``exact_count`` is the true number of extensions whenever it is known
    exactly (always for m <= UNIFORM_SAMPLING_LIMIT, or when enumeration
    completed under the cap); None otherwise.
    """

    orderings: tuple[tuple[int, ...], ...]
    exact_count: int | None
    truncated: bool


def _enumerate(dag: DepDag, cap: int) -> tuple[list[tuple[int, ...]], bool]:
    nodes = sorted(dag.node_ids)
    deps = dag.deps
    out: list[tuple[int, ...]] = []
    placed: set[int] = set()
    prefix: list[int] = []

    def grow() -> bool:
        if len(prefix) == len(nodes):
            out.append(tuple(prefix))
            return len(out) < cap
        for v in nodes:
            if v not in placed and deps[v] <= placed:
                placed.add(v)
                prefix.append(v)
                keep_going = grow()
                prefix.pop()
                placed.remove(v)
                if not keep_going:
                    return False
        return True

    completed = grow()
    return out, not completed


def enumerate_linear_extensions(dag: DepDag, cap: int = 10_000) -> ExtensionSet:
    """All topological orderings of the DAG, up to ``cap``.

    Branches over every ready step (all prerequisites already placed) in id
    order, so output order is deterministic and duplicates are impossible.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    orderings, truncated = _enumerate(dag, cap)
    if not truncated:
        exact = len(orderings)
    elif dag.m <= UNIFORM_SAMPLING_LIMIT:
        exact = count_linear_extensions(dag)
    else:
        exact = None
    return ExtensionSet(tuple(orderings), exact, truncated)


def _component_count(nodes: list[int], deps: Mapping[int, frozenset[int]]) -> int:
    """Exact extension count of one weakly-connected component via memoized
    recursion on the bitmask of already-removed nodes."""
    index = {v: i for i, v in enumerate(nodes)}
    depmask = [0] * len(nodes)
    for v in nodes:
        mask = 0
        for u in deps[v]:
            mask |= 1 << index[u]
        depmask[index[v]] = mask
    full = (1 << len(nodes)) - 1
    memo: dict[int, int] = {full: 1}

    def count_from(removed: int) -> int:
        cached = memo.get(removed)
        if cached is not None:
            return cached
        total = 0
        for i in range(len(nodes)):
            bit = 1 << i
            if not removed & bit and depmask[i] & removed == depmask[i]:
                total += count_from(removed | bit)
        memo[removed] = total
        return total

    return count_from(0)


def _weak_components(dag: DepDag) -> list[list[int]]:
    neighbours: dict[int, set[int]] = {v: set() for v in dag.node_ids}
    for i, j in dag.edges():
        neighbours[i].add(j)
        neighbours[j].add(i)
    seen: set[int] = set()
    comps: list[list[int]] = []
    for start in sorted(dag.node_ids):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in neighbours[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def count_linear_extensions(dag: DepDag) -> int:
    """Exact number of linear extensions.

    Decomposes into weakly-connected components (extensions of a disjoint
    union interleave freely, contributing a multinomial factor) and counts
    each component by memoized recursion over removed-node sets.
    """
    if dag.m > COUNT_LIMIT:
        raise TooLarge(f"exact counting is capped at m={COUNT_LIMIT}, got m={dag.m}")
    if dag.m == 0:
        return 1
    total = math.factorial(dag.m)
    product = 1
    for comp in _weak_components(dag):
        total //= math.factorial(len(comp))
        product *= _component_count(comp, dag.deps)
    return total * product


def tfi_exact(dag: DepDag) -> Fraction:
    """Topological Freedom Index: linear-extension count over m!, in (0, 1].

    1 means the steps are fully reorderable; 1/m! means the dependencies
    force a single total order.
    """
    if dag.m == 0:
        raise TooShort("TFI is undefined for an empty DAG")
    return Fraction(count_linear_extensions(dag), math.factorial(dag.m))


def tfi(dag: DepDag) -> float:
    return float(tfi_exact(dag))


@dataclass(frozen=True)
class DrawnExtension:
    """One sampled ordering. ``uniform`` is False for the large-m fallback."""

    ordering: tuple[int, ...]
    uniform: bool


def sample_extension(dag: DepDag, rng: Random) -> DrawnExtension:
    """Draw one linear extension.

    For m <= UNIFORM_SAMPLING_LIMIT the draw is exactly uniform over all
    extensions: at each position every ready step is weighted by the number
    of extensions of the remainder. Larger DAGs fall back to Kahn's
    algorithm with uniform tie-breaking, which is fast but not uniform over
    extensions, and the result is tagged accordingly.
    """
    nodes = sorted(dag.node_ids)
    deps = dag.deps
    if dag.m <= UNIFORM_SAMPLING_LIMIT:
        index = {v: i for i, v in enumerate(nodes)}
        depmask = {v: 0 for v in nodes}
        for v in nodes:
            for u in deps[v]:
                depmask[v] |= 1 << index[u]
        full = (1 << len(nodes)) - 1
        memo: dict[int, int] = {full: 1}

        def count_from(removed: int) -> int:
            cached = memo.get(removed)
            if cached is not None:
                return cached
            total = 0
            for v in nodes:
                bit = 1 << index[v]
                if not removed & bit and depmask[v] & removed == depmask[v]:
                    total += count_from(removed | bit)
            memo[removed] = total
            return total

        removed = 0
        ordering: list[int] = []
        while len(ordering) < len(nodes):
            ready = [
                v
                for v in nodes
                if not removed & (1 << index[v])
                and depmask[v] & removed == depmask[v]
            ]
            weights = [count_from(removed | (1 << index[v])) for v in ready]
            pick = rng.choices(ready, weights=weights, k=1)[0]
            ordering.append(pick)
            removed |= 1 << index[pick]
        return DrawnExtension(tuple(ordering), uniform=True)

    placed: set[int] = set()
    ordering = []
    remaining = set(nodes)
    while remaining:
        ready = sorted(v for v in remaining if deps[v] <= placed)
        pick = ready[rng.randrange(len(ready))]
        ordering.append(pick)
        placed.add(pick)
        remaining.remove(pick)
    return DrawnExtension(tuple(ordering), uniform=False)


_NUM_REF = {
    "step": re.compile(r"\b(step)\s+(\d+)\b", re.IGNORECASE),
    "premise": re.compile(r"\b(premise)\s+(\d+)\b", re.IGNORECASE),
}


def rewrite_numbered_refs(text: str, kind: str, mapping: Mapping[int, int]) -> tuple[str, int]:
    """Rewrite "step N" / "premise N" tokens through an old->new id map.

    Word-boundary, case-insensitive on the keyword (its original casing is
    kept); numbers outside the map are left alone. Every replacement reads
    the original string, so swapped ids cannot collide. Returns the new text
    and the number of tokens rewritten.
    """
    hits = 0

    def swap(match: re.Match) -> str:
        nonlocal hits
        old = int(match.group(2))
        new = mapping.get(old)
        if new is None:
            return match.group(0)
        hits += 1
        return f"{match.group(1)} {new}"

    return _NUM_REF[kind].sub(swap, text), hits


def _renumber(solution: Solution, ordering: Sequence[int]) -> Solution:
    """Rearrange steps into ``ordering`` and renumber ids, refs, and prose."""
    new_id = {old: pos for pos, old in enumerate(ordering, start=1)}
    steps = []
    for pos, old in enumerate(ordering, start=1):
        s = solution.step_by_id(old)
        text, _ = rewrite_numbered_refs(s.text, "step", new_id)
        steps.append(
            Step(
                id=pos,
                goal=s.goal,
                premises_used=s.premises_used,
                steps_used=frozenset(new_id[u] for u in s.steps_used),
                result=s.result,
                text=text,
            )
        )
    answer, _ = rewrite_numbered_refs(solution.final_answer, "step", new_id)
    return Solution(instance_id=solution.instance_id, steps=tuple(steps), final_answer=answer)


def reorder_solution(solution: Solution, ordering: Sequence[int]) -> Solution:
    """Rewrite the solution into a given linear extension of its step DAG.

    Steps are renumbered 1..m in their new positions, prerequisite sets are
    remapped, and prose "step N" tokens follow the renumbering, so the
    result again satisfies the no-forward-reference invariant.
    """
    dag = build_dag(solution)
    if not dag.respects(ordering):
        raise InvalidExtension(
            f"{list(ordering)} violates the step dependencies of {solution.instance_id}"
        )
    return _renumber(solution, ordering)


def random_step_shuffle(solution: Solution, rng: Random) -> Solution:
    """Dependency-blind baseline: a uniformly random non-identity step order.

    Renumbering and prose rewriting match reorder_solution exactly; the
    output may (intentionally) violate step dependencies.
    """
    m = solution.m
    if m < 2:
        raise TooShort(f"need at least 2 steps to shuffle, got m={m}")
    order = [s.id for s in solution.steps]
    while True:
        rng.shuffle(order)
        if any(o != i for i, o in enumerate(order, start=1)):
            break
    return _renumber(solution, order)


def remap_premise_refs(solution: Solution, p: Permutation) -> Solution:
    """Follow a premise permutation through a solution.

    Every cited premise index is replaced by its new position under ``p``,
    and prose "premise N" tokens are rewritten through the same map.
    """
    mapping = {i: p.new_position(i) for i in range(1, p.n + 1)}
    steps = []
    for s in solution.steps:
        for idx in sorted(s.premises_used):
            if idx not in mapping:
                raise DanglingPremiseRef(s.id, idx)
        text, _ = rewrite_numbered_refs(s.text, "premise", mapping)
        steps.append(
            replace(
                s,
                premises_used=frozenset(mapping[idx] for idx in s.premises_used),
                text=text,
            )
        )
    answer, _ = rewrite_numbered_refs(solution.final_answer, "premise", mapping)
    return Solution(instance_id=solution.instance_id, steps=tuple(steps), final_answer=answer)


# TFI histogram bins: [0.0,0.1), ..., [0.8,0.9), [0.9,1.0].
TFI_BIN_LABELS = tuple(
    f"[{k / 10:.1f},{(k + 1) / 10:.1f}" + (")" if k < 9 else "]") for k in range(10)
)


@dataclass(frozen=True)
class TfiReport:
    """Per-solution TFI values plus their binned distribution."""

    values: dict[str, float]
    histogram: dict[str, int]
    failures: dict[str, str]

    def percentages(self) -> dict[str, float]:
        total = sum(self.histogram.values())
        if total == 0:
            return {label: 0.0 for label in self.histogram}
        return {label: 100.0 * count / total for label, count in self.histogram.items()}


def tfi_bin_label(value: Fraction) -> str:
    k = min(int(value * 10), 9)
    return TFI_BIN_LABELS[k]


def tfi_report(solutions: Iterable[Solution]) -> TfiReport:
    """TFI per solution and a ten-bin histogram; per-solution failures are
    collected rather than raised."""
    values: dict[str, float] = {}
    histogram = {label: 0 for label in TFI_BIN_LABELS}
    failures: dict[str, str] = {}
    for solution in solutions:
        try:
            exact = tfi_exact(build_dag(solution))
        except OrderAugError as err:
            failures[solution.instance_id] = err.code
            continue
        values[solution.instance_id] = float(exact)
        histogram[tfi_bin_label(exact)] += 1
    return TfiReport(values, histogram, failures)
