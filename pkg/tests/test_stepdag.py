import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orderaug.model import Permutation, Step, validate_solution
from orderaug.stepdag import (
    COUNT_LIMIT,
    TFI_BIN_LABELS,
    UNIFORM_SAMPLING_LIMIT,
    CyclicDependency,
    DanglingPremiseRef,
    DepDag,
    SelfDependency,
    TooLarge,
    UnknownStepRef,
    build_dag,
    count_linear_extensions,
    enumerate_linear_extensions,
    random_step_shuffle,
    remap_premise_refs,
    reorder_solution,
    rewrite_numbered_refs,
    sample_extension,
    tfi,
    tfi_bin_label,
    tfi_exact,
    tfi_report,
)

from conftest import FIXTURE_DEPS, FIXTURE_EDGES, make_solution
from oracles import brute_force_extensions, random_dag


class TestDepDag:
    def test_fixture_edges(self):
        dag = DepDag.from_deps(FIXTURE_DEPS)
        assert dag.edges() == FIXTURE_EDGES
        assert dag.m == 4

    def test_rejects_self_loop(self):
        with pytest.raises(SelfDependency):
            DepDag.from_deps({1: {1}})

    def test_rejects_unknown_ref(self):
        with pytest.raises(UnknownStepRef):
            DepDag.from_deps({1: {9}})

    def test_rejects_cycle(self):
        with pytest.raises(CyclicDependency) as exc:
            DepDag.from_deps({1: {2}, 2: {3}, 3: {1}})
        assert "cycle" in str(exc.value).lower()

    def test_respects(self):
        dag = DepDag.from_deps(FIXTURE_DEPS)
        assert dag.respects((1, 2, 3, 4))
        assert dag.respects((2, 1, 3, 4))
        assert not dag.respects((3, 1, 2, 4))
        assert not dag.respects((1, 2, 3))

    def test_build_dag_from_solution(self):
        dag = build_dag(make_solution("s"))
        assert dag.edges() == FIXTURE_EDGES


class TestEnumeration:
    def test_fixture_has_two_extensions(self):
        ext = enumerate_linear_extensions(DepDag.from_deps(FIXTURE_DEPS))
        assert ext.orderings == ((1, 2, 3, 4), (2, 1, 3, 4))
        assert ext.exact_count == 2
        assert not ext.truncated

    def test_matches_brute_force_on_random_dags(self):
        rng = random.Random(20240501)
        for _ in range(120):
            m = rng.randint(1, 6)
            deps = random_dag(rng, m)
            dag = DepDag.from_deps(deps)
            expected = brute_force_extensions(sorted(deps), deps)
            ext = enumerate_linear_extensions(dag)
            assert sorted(ext.orderings) == sorted(expected)
            assert count_linear_extensions(dag) == len(expected)

    def test_cap_truncates_but_count_stays_exact(self):
        # edgeless 6-node DAG: 720 extensions, cap at 10
        dag = DepDag.from_deps({i: set() for i in range(1, 7)})
        ext = enumerate_linear_extensions(dag, cap=10)
        assert len(ext.orderings) == 10
        assert ext.truncated
        assert ext.exact_count == 720

    def test_count_limit_enforced(self):
        dag = DepDag.from_deps({i: set() for i in range(1, COUNT_LIMIT + 2)})
        with pytest.raises(TooLarge):
            count_linear_extensions(dag)

    def test_count_combines_components(self):
        # two independent chains of 2: 4!/(2!*2!) = 6 interleavings
        dag = DepDag.from_deps({1: set(), 2: {1}, 3: set(), 4: {3}})
        assert count_linear_extensions(dag) == 6


class TestTfi:
    def test_fixture_value(self):
        assert tfi_exact(DepDag.from_deps(FIXTURE_DEPS)) == Fraction(1, 12)

    def test_edgeless_is_one(self):
        for m in range(1, 9):
            dag = DepDag.from_deps({i: set() for i in range(1, m + 1)})
            assert tfi_exact(dag) == 1

    def test_chain_is_inverse_factorial(self):
        for m in range(2, 11):
            deps = {i: ({i - 1} if i > 1 else set()) for i in range(1, m + 1)}
            assert tfi_exact(DepDag.from_deps(deps)) == Fraction(1, math.factorial(m))

    def test_float_view(self):
        assert tfi(DepDag.from_deps(FIXTURE_DEPS)) == pytest.approx(1 / 12)

    def test_bin_labels(self):
        assert len(TFI_BIN_LABELS) == 10
        assert tfi_bin_label(Fraction(0, 1)) == "[0.0,0.1)"
        assert tfi_bin_label(Fraction(1, 12)) == "[0.0,0.1)"
        assert tfi_bin_label(Fraction(1, 2)) == "[0.5,0.6)"
        # top bin is closed so TFI = 1 lands inside it
        assert tfi_bin_label(Fraction(1)) == "[0.9,1.0]"

    def test_report(self):
        solutions = [make_solution("a"), make_solution("b")]
        report = tfi_report(solutions)
        assert report.values == {"a": 1 / 12, "b": 1 / 12}
        assert report.histogram["[0.0,0.1)"] == 2
        assert sum(report.histogram.values()) == 2
        assert report.failures == {}
        assert report.percentages()["[0.0,0.1)"] == 100.0


class TestSampleExtension:
    def test_small_dag_uniform_flag_and_validity(self):
        dag = DepDag.from_deps(FIXTURE_DEPS)
        rng = random.Random(7)
        for _ in range(50):
            drawn = sample_extension(dag, rng)
            assert drawn.uniform
            assert dag.respects(drawn.ordering)

    def test_large_dag_falls_back(self):
        m = UNIFORM_SAMPLING_LIMIT + 1
        deps = {i: ({i - 1} if i > 1 else set()) for i in range(1, m + 1)}
        deps[m] = set()  # give it some freedom
        dag = DepDag.from_deps(deps)
        drawn = sample_extension(dag, random.Random(7))
        assert not drawn.uniform
        assert dag.respects(drawn.ordering)

    def test_uniformity_on_two_extension_dag(self):
        dag = DepDag.from_deps(FIXTURE_DEPS)
        rng = random.Random(99)
        counts = {(1, 2, 3, 4): 0, (2, 1, 3, 4): 0}
        for _ in range(2000):
            counts[sample_extension(dag, rng).ordering] += 1
        assert abs(counts[(1, 2, 3, 4)] - 1000) < 100


class TestRewriteRefs:
    def test_rewrites_and_counts(self):
        text, hits = rewrite_numbered_refs(
            "From step 1 and Step 2, see premise 3.", "step", {1: 2, 2: 1}
        )
        assert text == "From step 2 and Step 1, see premise 3."
        assert hits == 2

    def test_keeps_unmapped_numbers(self):
        text, hits = rewrite_numbered_refs("step 9 stays", "step", {1: 2})
        assert text == "step 9 stays"
        assert hits == 0

    def test_word_boundaries(self):
        text, hits = rewrite_numbered_refs("lockstep 1 overstep 2", "step", {1: 5})
        assert text == "lockstep 1 overstep 2"
        assert hits == 0

    def test_premise_kind(self):
        text, hits = rewrite_numbered_refs("Using premise 2.", "premise", {2: 4})
        assert text == "Using premise 4."
        assert hits == 1

    def test_simultaneous_swap_no_chaining(self):
        # 1->2 and 2->1 applied at once, not sequentially
        text, _ = rewrite_numbered_refs("step 1, step 2", "step", {1: 2, 2: 1})
        assert text == "step 2, step 1"


class TestReorderSolution:
    def test_reorder_renumbers_and_keeps_content(self):
        sol = make_solution("s")
        out = reorder_solution(sol, (2, 1, 3, 4))
        assert [s.id for s in out.steps] == [1, 2, 3, 4]
        # step ids are positional; old step 2 is now step 1
        assert out.steps[0].goal == sol.steps[1].goal
        assert out.steps[0].result == sol.steps[1].result
        assert {s.goal for s in out.steps} == {s.goal for s in sol.steps}
        assert out.final_answer == sol.final_answer

    def test_reorder_remaps_dependencies(self):
        sol = make_solution("s")
        out = reorder_solution(sol, (2, 1, 3, 4))
        # old step 3 depended on {1, 2}; those steps kept positions {2, 1}
        assert out.steps[2].steps_used == frozenset({1, 2})
        assert validate_solution(out) == []

    def test_reorder_rewrites_prose(self):
        sol = make_solution("s")
        out = reorder_solution(sol, (2, 1, 3, 4))
        step3 = out.steps[2]
        assert "Building on step 1." in step3.text
        assert "Building on step 2." in step3.text

    def test_reorder_rejects_non_extension(self):
        sol = make_solution("s")
        with pytest.raises(Exception):
            reorder_solution(sol, (3, 1, 2, 4))

    def test_random_shuffle_permutes_without_validity(self):
        sol = make_solution("s")
        rng = random.Random(3)
        seen = set()
        for _ in range(20):
            out = random_step_shuffle(sol, rng)
            assert [s.id for s in out.steps] == [1, 2, 3, 4]
            assert {s.goal for s in out.steps} == {s.goal for s in sol.steps}
            seen.add(tuple(s.goal for s in out.steps))
        assert len(seen) > 1  # actually shuffles

    @given(st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=40, deadline=None)
    def test_reorder_any_extension_stays_valid(self, seed):
        rng = random.Random(seed)
        deps = random_dag(rng, rng.randint(2, 6))
        ids = sorted(deps)
        steps = tuple(
            Step(
                id=i,
                goal=f"g{i}",
                premises_used=frozenset({1}),
                steps_used=frozenset(deps[i]),
                result=f"r{i}",
                text=f"Step {i}: uses " + ", ".join(f"step {d}" for d in sorted(deps[i])),
            )
            for i in ids
        )
        from orderaug.model import Solution

        sol = Solution(instance_id="x", steps=steps, final_answer="True")
        ext = enumerate_linear_extensions(build_dag(sol))
        ordering = ext.orderings[rng.randrange(len(ext.orderings))]
        out = reorder_solution(sol, ordering)
        assert validate_solution(out) == []
        assert {s.result for s in out.steps} == {s.result for s in sol.steps}


class TestRemapPremiseRefs:
    def test_remaps_sets_and_prose(self):
        sol = make_solution("s")
        p = Permutation((2, 1, 3, 4))  # premise 1 -> position 2, 2 -> 1
        out = remap_premise_refs(sol, p)
        assert out.steps[0].premises_used == frozenset({2, 1})
        assert "Using premise 2." in out.steps[0].text
        assert out.steps[1].premises_used == frozenset({3})

    def test_roundtrip_through_inverse(self):
        sol = make_solution("s")
        p = Permutation((3, 1, 4, 2))
        assert remap_premise_refs(remap_premise_refs(sol, p), p.inverse()) == sol

    def test_dangling_ref_raises(self):
        sol = make_solution("s", premises={1: {7}})
        with pytest.raises(DanglingPremiseRef):
            remap_premise_refs(sol, Permutation((2, 1, 3, 4)))
