"""Command-line entry point.

Subcommands wire the library into deterministic, seedable runs:

- ``augment conditions|steps|combined|random-steps``: order-based
  augmentation of a canonical JSONL dataset
- ``shuffle testset``: premise-shuffled evaluation copies
- ``gen solutions``: the three-stage endpoint pipeline with a resumable
  journal
- ``analyze tfi|tau|sizes``: corpus statistics as JSON
- ``validate fol|dataset``: diagnostics with a nonzero exit on errors
- ``op <name>``: one-shot JSON-over-stdio bridge used by the bindings

Exit codes: 0 success, 1 input/data errors, 2 configuration errors.
Settings merge as defaults < config file < flags; all randomness flows
from one root seed through per-instance substreams, so outputs are
byte-identical across reruns and unaffected by --jobs.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

import yaml

from .errors import IoError, OrderAugError
from .fol import validate_fol_fields
from .ingest import (
    FORMATS,
    DatasetFile,
    DatasetRecord,
    MissingSolution,
    _step_from_json,
    emit_dataset,
    parse_dataset,
    record_from_json,
    record_to_json,
    record_violations,
    scan_dataset,
)
from .model import Permutation, Solution
from .permute import (
    TauBin,
    apply_permutation,
    kendall_tau,
    kendall_tau_exact,
    sample_permutation_in_bin,
    shuffle_premises,
)
from .pipeline import EndpointConfig, RetryPolicy, run_pipeline
from .report import RunManifest, format_stats_table, summarize
from .rng import substream
from .stepdag import (
    DepDag,
    TooShort,
    build_dag,
    count_linear_extensions,
    enumerate_linear_extensions,
    random_step_shuffle,
    remap_premise_refs,
    reorder_solution,
    sample_extension,
    tfi,
    tfi_exact,
)
from .version import __version__

log = logging.getLogger("orderaug")

_CONFIG_KEYS = {
    "seed", "on_error", "log_level", "format", "k", "tau_bin", "max_attempts",
    "per_instance", "max_extensions", "include_original", "jobs", "endpoint",
    "model", "concurrency", "timeout", "regen_budget", "on_label_mismatch",
    "temperature",
}


class ConfigError(OrderAugError):
    code = "ConfigError"


def _load_config(path: str | None) -> dict[str, Any]:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from err
    except yaml.YAMLError as err:
        raise ConfigError(f"config file {path} is not valid YAML: {err}") from err
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a mapping at top level")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return data


class Settings:
    """Effective option values: defaults < config file < explicit flags."""

    def __init__(self, args: argparse.Namespace, file_cfg: dict[str, Any]):
        self._args = vars(args)
        self._file = file_cfg

    def get(self, key: str, default: Any = None) -> Any:
        flag = self._args.get(key)
        if flag is not None:
            return flag
        if key in self._file:
            return self._file[key]
        return default

    def snapshot(self, keys: Iterable[str]) -> dict[str, Any]:
        return {k: self.get(k) for k in sorted(keys) if self.get(k) is not None}


def _setup_logging(level: str) -> None:
    numeric = getattr(logging, level.upper(), logging.INFO)
    logging.basicConfig(stream=sys.stderr, level=numeric, format="%(levelname)s %(message)s")


def _fail(code: int, err: Exception) -> int:
    name = getattr(err, "code", type(err).__name__)
    sys.stderr.write(json.dumps({"error": name, "message": str(err)}) + "\n")
    return code


def _read_records(settings: Settings, paths: Sequence[str]) -> list[DatasetRecord]:
    fmt = settings.get("format", "generic")
    on_error = settings.get("on_error", "fail")
    records: list[DatasetRecord] = []
    for path in paths:
        try:
            records.extend(parse_dataset(DatasetFile(Path(path), fmt), on_error=on_error))
        except OSError as err:
            raise IoError(f"{path}: {err}") from err
    return records


def _write_records(records: Sequence[DatasetRecord], output: str) -> None:
    if output == "-":
        for record in records:
            sys.stdout.write(json.dumps(record_to_json(record), ensure_ascii=False) + "\n")
        return
    try:
        emit_dataset(records, Path(output))
    except OSError as err:
        raise IoError(f"{output}: {err}") from err


def _write_json(payload: Any, output: str | None) -> None:
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if output and output != "-":
        try:
            Path(output).write_text(text, encoding="utf-8")
        except OSError as err:
            raise IoError(f"{output}: {err}") from err
    else:
        sys.stdout.write(text)


def _write_manifest(manifest: RunManifest, path: str | None) -> None:
    if path:
        _write_json(manifest.to_json(), path)


def _map_records(
    worker: Callable[[DatasetRecord], list[DatasetRecord]],
    records: Sequence[DatasetRecord],
    jobs: int,
) -> list[DatasetRecord]:
    """Apply worker per record, preserving input order regardless of jobs."""
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(worker, records))
    else:
        chunks = [worker(r) for r in records]
    return [r for chunk in chunks for r in chunk]


# ---------------------------------------------------------------------------
# augment subcommands.


def _identity_ordering(solution: Solution) -> tuple[int, ...]:
    return tuple(s.id for s in solution.steps)


def _ordering_pool(
    dag: DepDag, solution: Solution, max_extensions: int
) -> list[tuple[int, ...]] | None:
    """All non-identity orderings when enumerable, else None (sample instead)."""
    ext = enumerate_linear_extensions(dag, cap=max_extensions)
    if ext.truncated:
        return None
    identity = _identity_ordering(solution)
    return [o for o in ext.orderings if o != identity]


def _draw_orderings(
    solution: Solution, count: int, rng, max_extensions: int
) -> list[tuple[int, ...]]:
    """Up to ``count`` distinct non-identity valid orderings of the steps."""
    dag = build_dag(solution)
    pool = _ordering_pool(dag, solution, max_extensions)
    if pool is not None:
        if not pool:
            return []
        rng.shuffle(pool)
        return pool[:count]
    identity = _identity_ordering(solution)
    seen: set[tuple[int, ...]] = set()
    out: list[tuple[int, ...]] = []
    attempts = 0
    while len(out) < count and attempts < 100 * count:
        attempts += 1
        ordering = sample_extension(dag, rng).ordering
        if ordering != identity and ordering not in seen:
            seen.add(ordering)
            out.append(ordering)
    return out


def _augment_conditions_worker(settings: Settings, seed: int):
    k = int(settings.get("k", 1))
    bin = TauBin.parse(str(settings.get("tau_bin", "random")))
    max_attempts = int(settings.get("max_attempts", 10_000))

    def worker(record: DatasetRecord) -> list[DatasetRecord]:
        inst = record.instance
        rng = substream(seed, "conditions", inst.id)
        out = []
        for variant in shuffle_premises(inst, k, bin, rng, max_attempts):
            solution = record.solution
            if solution is not None and not variant.passthrough:
                solution = remap_premise_refs(solution, variant.permutation)
                solution = replace(solution, instance_id=variant.instance.id)
            out.append(
                DatasetRecord(
                    instance=variant.instance,
                    solution=solution,
                    lineage="condition_shuffled",
                    source_id=inst.id,
                    permutation=variant.permutation,
                )
            )
        return out

    return worker


def _augment_steps_worker(settings: Settings, seed: int, stream: str = "steps"):
    per_instance = int(settings.get("per_instance", 1))
    max_extensions = int(settings.get("max_extensions", 10_000))
    on_error = settings.get("on_error", "fail")

    def worker(record: DatasetRecord) -> list[DatasetRecord]:
        if record.solution is None:
            if on_error == "fail":
                raise MissingSolution(record.instance.id)
            return []
        inst = record.instance
        rng = substream(seed, stream, inst.id)
        out = []
        orderings = _draw_orderings(record.solution, per_instance, rng, max_extensions)
        for i, ordering in enumerate(orderings, start=1):
            new_id = f"{inst.id}#steps{i}"
            reordered = replace(
                reorder_solution(record.solution, ordering), instance_id=new_id
            )
            out.append(
                DatasetRecord(
                    instance=replace(inst, id=new_id),
                    solution=reordered,
                    lineage="answer_steps_shuffled",
                    source_id=inst.id,
                    permutation=None,
                )
            )
        return out

    return worker


def _augment_random_steps_worker(settings: Settings, seed: int):
    per_instance = int(settings.get("per_instance", 1))
    on_error = settings.get("on_error", "fail")

    def worker(record: DatasetRecord) -> list[DatasetRecord]:
        if record.solution is None:
            if on_error == "fail":
                raise MissingSolution(record.instance.id)
            return []
        inst = record.instance
        out = []
        for i in range(1, per_instance + 1):
            rng = substream(seed, "random-steps", inst.id, i)
            try:
                shuffled = random_step_shuffle(record.solution, rng)
            except TooShort:
                break
            new_id = f"{inst.id}#rand{i}"
            out.append(
                DatasetRecord(
                    instance=replace(inst, id=new_id),
                    solution=replace(shuffled, instance_id=new_id),
                    lineage="random_steps_shuffled",
                    source_id=inst.id,
                    permutation=None,
                )
            )
        return out

    return worker


def _augment_combined_worker(settings: Settings, seed: int):
    k = int(settings.get("k", 1))
    bin = TauBin.parse(str(settings.get("tau_bin", "random")))
    max_attempts = int(settings.get("max_attempts", 10_000))
    max_extensions = int(settings.get("max_extensions", 10_000))
    on_error = settings.get("on_error", "fail")

    def worker(record: DatasetRecord) -> list[DatasetRecord]:
        if record.solution is None:
            if on_error == "fail":
                raise MissingSolution(record.instance.id)
            return []
        inst = record.instance
        step_rng = substream(seed, "combined", inst.id, "steps")
        orderings = _draw_orderings(record.solution, k, step_rng, max_extensions)
        out = []
        for i, ordering in enumerate(orderings, start=1):
            new_id = f"{inst.id}#comb{i}"
            reordered = reorder_solution(record.solution, ordering)
            cond_rng = substream(seed, "combined", inst.id, "conds", i)
            if inst.n >= 2:
                perm = sample_permutation_in_bin(inst.n, bin, cond_rng, max_attempts)
            else:
                perm = Permutation.identity(inst.n)
            new_inst = apply_permutation(inst, perm, new_id)
            solution = replace(
                remap_premise_refs(reordered, perm), instance_id=new_id
            )
            out.append(
                DatasetRecord(
                    instance=new_inst,
                    solution=solution,
                    lineage="condition_and_answer_shuffled",
                    source_id=inst.id,
                    permutation=perm,
                )
            )
        return out

    return worker


def _cmd_augment(args: argparse.Namespace, settings: Settings) -> int:
    import time

    started = time.perf_counter()
    seed = int(settings.get("seed", 0))
    records = _read_records(settings, [args.input])
    workers = {
        "conditions": _augment_conditions_worker,
        "steps": _augment_steps_worker,
        "random-steps": _augment_random_steps_worker,
        "combined": _augment_combined_worker,
    }
    kind = args.augment_kind
    if kind == "steps" and settings.get("mode", "dag") == "random":
        kind = "random-steps"
    worker = workers[kind](settings, seed)
    jobs = int(settings.get("jobs", 1))
    augmented = _map_records(worker, records, jobs)

    out: list[DatasetRecord] = []
    if _truthy(settings.get("include_original", False)):
        out.extend(records)
    out.extend(augmented)
    _write_records(out, args.output)
    lineages: dict[str, int] = {}
    for r in out:
        lineages[r.lineage] = lineages.get(r.lineage, 0) + 1
    manifest = RunManifest(
        command=f"augment {args.augment_kind}",
        seed=seed,
        config=settings.snapshot(_CONFIG_KEYS),
        inputs=({"path": args.input, "records": len(records)},),
        outputs=({"path": args.output, "records": len(out)},),
        lineage_counts=lineages,
        elapsed_seconds=time.perf_counter() - started,
    )
    _write_manifest(manifest, settings.get("manifest"))
    log.info("augment %s: %d in, %d out", args.augment_kind, len(records), len(out))
    return 0


def _truthy(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).lower() in ("true", "1", "yes", "on")


def _cmd_shuffle_testset(args: argparse.Namespace, settings: Settings) -> int:
    seed = int(settings.get("seed", 0))
    k = int(settings.get("k", 1))
    include_original = _truthy(settings.get("include_original", True))
    records = _read_records(settings, [args.input])
    bin = TauBin.random()
    max_attempts = int(settings.get("max_attempts", 10_000))
    out: list[DatasetRecord] = []
    for record in records:
        if include_original:
            out.append(record)
        inst = record.instance
        rng = substream(seed, "testset", inst.id)
        for variant in shuffle_premises(inst, k, bin, rng, max_attempts):
            solution = record.solution
            if solution is not None and not variant.passthrough:
                solution = replace(
                    remap_premise_refs(solution, variant.permutation),
                    instance_id=variant.instance.id,
                )
            out.append(
                DatasetRecord(
                    instance=variant.instance,
                    solution=solution,
                    lineage="condition_shuffled",
                    source_id=inst.id,
                    permutation=variant.permutation,
                )
            )
    _write_records(out, args.output)
    log.info("shuffle testset: %d in, %d out", len(records), len(out))
    return 0


def _cmd_gen_solutions(args: argparse.Namespace, settings: Settings) -> int:
    records = _read_records(settings, [args.input])
    cfg = EndpointConfig(
        base_url=settings.get("endpoint") or "",
        model=str(settings.get("model", "gpt-4o-mini")),
        max_concurrency=int(settings.get("concurrency", 4)),
        timeout=float(settings.get("timeout", 60.0)),
        retry=RetryPolicy(),
        solution_temperature=float(settings.get("temperature", 0.7)),
        regen_budget=int(settings.get("regen_budget", 3)),
        on_label_mismatch=str(settings.get("on_label_mismatch", "retry")),
    )
    if not cfg.base_url:
        raise ConfigError("--endpoint is required (URL or mock:<fixture.json>)")
    result = run_pipeline(records, cfg, Path(args.journal))
    payload = {
        "processed": result.processed,
        "skipped": result.skipped,
        "quarantined": result.quarantined,
        "quarantined_ids": list(result.quarantined_ids),
    }
    _write_json(payload, settings.get("output"))
    return 0


def _cmd_analyze(args: argparse.Namespace, settings: Settings) -> int:
    fmt = settings.get("format", "generic")
    on_error = settings.get("on_error", "fail")
    manifest, stats = summarize(
        [Path(p) for p in args.input],
        fmt=fmt,
        on_error=on_error,
        config=settings.snapshot(_CONFIG_KEYS),
    )
    section = {
        "tfi": {"records": stats["records"], "tfi": stats["tfi"]},
        "tau": {"records": stats["records"], "tau": stats["tau"]},
        "sizes": {
            "records": stats["records"],
            "lineages": stats["lineages"],
            "premise_counts": stats["premise_counts"],
            "step_counts": stats["step_counts"],
        },
    }[args.analyze_kind]
    payload = {"inputs": [str(p) for p in args.input], **section}
    _write_json(payload, settings.get("output"))
    _write_manifest(manifest, settings.get("manifest"))
    if log.isEnabledFor(logging.INFO):
        sys.stderr.write(format_stats_table(stats) + "\n")
    return 0


def _violation_json(v) -> dict[str, Any]:
    return {"code": v.code, "message": v.message, "field": v.field, "severity": v.severity}


def _cmd_validate(args: argparse.Namespace, settings: Settings) -> int:
    fmt = settings.get("format", "generic")
    file = DatasetFile(Path(args.input), fmt)
    per_instance: dict[str, list[dict[str, Any]]] = {}
    errors = 0
    warnings = 0
    try:
        for lineno, record, err in scan_dataset(file):
            if err is not None:
                errors += 1
                per_instance.setdefault(f"line {lineno}", []).append(
                    {"code": err.code, "message": str(err), "field": None,
                     "severity": "error"}
                )
                continue
            if args.validate_kind == "fol":
                found = validate_fol_fields(record.instance)
            else:
                found = record_violations(record) + validate_fol_fields(record.instance)
            if found:
                per_instance[record.instance.id] = [_violation_json(v) for v in found]
                errors += sum(1 for v in found if v.severity == "error")
                warnings += sum(1 for v in found if v.severity == "warning")
    except OSError as err:
        raise IoError(f"{args.input}: {err}") from err
    payload = {
        "input": args.input,
        "errors": errors,
        "warnings": warnings,
        "instances": per_instance,
    }
    _write_json(payload, settings.get("output"))
    return 1 if errors else 0


# ---------------------------------------------------------------------------
# op bridge: one-shot JSON over stdio, consumed by the bindings package.


def _op_shuffle_premises(payload: dict[str, Any]) -> Any:
    record = record_from_json(payload["record"])
    bin = TauBin.parse(str(payload.get("mode", "random")))
    seed = int(payload["seed"])
    k = int(payload.get("k", 1))
    rng = substream(seed, "conditions", record.instance.id)
    out = []
    for variant in shuffle_premises(record.instance, k, bin, rng):
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


def _dag_from_payload(payload: dict[str, Any]) -> DepDag:
    deps = {int(k): frozenset(int(x) for x in v) for k, v in payload["deps"].items()}
    return DepDag(node_ids=frozenset(deps), deps=deps)


def _op_enumerate_extensions(payload: dict[str, Any]) -> Any:
    dag = _dag_from_payload(payload)
    ext = enumerate_linear_extensions(dag, cap=int(payload.get("cap", 10_000)))
    return {
        "orderings": [list(o) for o in ext.orderings],
        "exact_count": ext.exact_count,
        "truncated": ext.truncated,
    }


def _op_tfi(payload: dict[str, Any]) -> Any:
    dag = _dag_from_payload(payload)
    exact = tfi_exact(dag)
    return {
        "tfi": tfi(dag),
        "extensions": count_linear_extensions(dag),
        "exact": f"{exact.numerator}/{exact.denominator}",
    }


def _op_kendall_tau(payload: dict[str, Any]) -> Any:
    perm = Permutation(tuple(int(i) for i in payload["sequence"]))
    exact = kendall_tau_exact(perm)
    return {"tau": kendall_tau(perm), "exact": f"{exact.numerator}/{exact.denominator}"}


def _op_reorder_solution(payload: dict[str, Any]) -> Any:
    obj = payload["solution"]
    solution = Solution(
        instance_id=str(payload.get("instance_id", "solution")),
        steps=tuple(_step_from_json(s) for s in obj["steps"]),
        final_answer=str(obj.get("final_answer", "")),
    )
    reordered = reorder_solution(solution, [int(i) for i in payload["ordering"]])
    return {
        "solution": {
            "steps": [
                {
                    "id": s.id,
                    "goal": s.goal,
                    "premises_used": sorted(s.premises_used),
                    "steps_used": sorted(s.steps_used),
                    "result": s.result,
                    "text": s.text,
                }
                for s in reordered.steps
            ],
            "final_answer": reordered.final_answer,
        }
    }


_OPS = {
    "shuffle-premises": _op_shuffle_premises,
    "enumerate-extensions": _op_enumerate_extensions,
    "tfi": _op_tfi,
    "kendall-tau": _op_kendall_tau,
    "reorder-solution": _op_reorder_solution,
}


def _cmd_op(args: argparse.Namespace, settings: Settings) -> int:
    payload = json.loads(sys.stdin.read() or "{}")
    result = _OPS[args.op_name](payload)
    sys.stdout.write(json.dumps(result, ensure_ascii=False) + "\n")
    return 0


# ---------------------------------------------------------------------------
# Parser assembly.


def _add_common_io(p: argparse.ArgumentParser, output_required: bool = True) -> None:
    p.add_argument("--input", required=True, help="input dataset (JSONL)")
    if output_required:
        p.add_argument("--output", required=True, help="output path, or - for stdout")
    p.add_argument("--format", choices=FORMATS, help="input format adapter")


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps unset options out of the leaf namespace; otherwise the
    # subparser copy-back would reset globals given before the subcommand.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="YAML config file (defaults < file < flags)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="root RNG seed (default 0)")
    common.add_argument("--on-error", choices=("fail", "skip"), dest="on_error",
                        default=argparse.SUPPRESS)
    common.add_argument("--log-level", dest="log_level", default=argparse.SUPPRESS,
                        choices=("debug", "info", "warning", "error"))

    parser = argparse.ArgumentParser(
        prog="orderaug",
        description="Order-based augmentation for premise/conclusion reasoning datasets.",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"orderaug {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    augment = sub.add_parser("augment", help="emit order-augmented records")
    augment_sub = augment.add_subparsers(dest="augment_kind", required=True)
    for kind in ("conditions", "steps", "combined", "random-steps"):
        p = augment_sub.add_parser(kind, parents=[common])
        _add_common_io(p)
        p.add_argument("--jobs", type=int, help="parallel workers (default 1)")
        p.add_argument("--include-original", dest="include_original",
                       choices=("true", "false"),
                       help="also emit the unmodified input records (default false)")
        p.add_argument("--manifest", help="write a run manifest JSON here")
        if kind in ("conditions", "combined"):
            p.add_argument("--k", type=int, help="copies per instance (default 1)")
            p.add_argument("--tau-bin", dest="tau_bin",
                           help="random or [lo,hi) over Kendall tau (default random)")
            p.add_argument("--max-attempts", dest="max_attempts", type=int,
                           help="sampling attempt budget (default 10000)")
        if kind in ("steps", "random-steps", "combined"):
            p.add_argument("--per-instance", dest="per_instance", type=int,
                           help="reorderings per solution (default 1)")
            p.add_argument("--max-extensions", dest="max_extensions", type=int,
                           help="enumeration cap before sampling kicks in (default 10000)")
        if kind == "steps":
            p.add_argument("--mode", choices=("dag", "random"),
                           help="dag keeps dependencies valid; random is the baseline")

    shuffle = sub.add_parser("shuffle", help="shuffle evaluation sets")
    shuffle_sub = shuffle.add_subparsers(dest="shuffle_kind", required=True)
    p = shuffle_sub.add_parser("testset", parents=[common])
    _add_common_io(p)
    p.add_argument("--k", type=int, help="shuffled copies per instance (default 1)")
    p.add_argument("--include-original", dest="include_original",
                   choices=("true", "false"),
                   help="keep originals alongside shuffles (default true)")

    gen = sub.add_parser("gen", help="run the endpoint pipeline")
    gen_sub = gen.add_subparsers(dest="gen_kind", required=True)
    p = gen_sub.add_parser("solutions", parents=[common])
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--endpoint", help="base URL, or mock:<fixture.json>")
    p.add_argument("--model")
    p.add_argument("--journal", required=True, help="append-only results JSONL")
    p.add_argument("--concurrency", type=int, help="max in-flight requests (default 4)")
    p.add_argument("--timeout", type=float)
    p.add_argument("--regen-budget", dest="regen_budget", type=int)
    p.add_argument("--on-label-mismatch", dest="on_label_mismatch",
                   choices=("retry", "drop"))
    p.add_argument("--temperature", type=float)
    p.add_argument("--output", help="write the run summary JSON here instead of stdout")

    analyze = sub.add_parser("analyze", help="corpus statistics as JSON")
    analyze_sub = analyze.add_subparsers(dest="analyze_kind", required=True)
    for kind in ("tfi", "tau", "sizes"):
        p = analyze_sub.add_parser(kind, parents=[common])
        p.add_argument("--input", required=True, nargs="+")
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--output", help="JSON output path (default stdout)")
        p.add_argument("--manifest", help="write a run manifest JSON here")

    validate = sub.add_parser("validate", help="diagnostics; nonzero exit on errors")
    validate_sub = validate.add_subparsers(dest="validate_kind", required=True)
    for kind in ("fol", "dataset"):
        p = validate_sub.add_parser(kind, parents=[common])
        p.add_argument("--input", required=True)
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--output", help="JSON output path (default stdout)")

    op = sub.add_parser("op", parents=[common],
                        help="JSON-over-stdio bridge for language bindings")
    op.add_argument("op_name", choices=sorted(_OPS))

    return parser


_INPUT_ERRORS = (OrderAugError, OSError)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        file_cfg = _load_config(getattr(args, "config", None))
    except ConfigError as err:
        return _fail(2, err)
    settings = Settings(args, file_cfg)
    _setup_logging(str(settings.get("log_level", "info")))

    try:
        if args.command == "augment":
            return _cmd_augment(args, settings)
        if args.command == "shuffle":
            return _cmd_shuffle_testset(args, settings)
        if args.command == "gen":
            return _cmd_gen_solutions(args, settings)
        if args.command == "analyze":
            return _cmd_analyze(args, settings)
        if args.command == "validate":
            return _cmd_validate(args, settings)
        if args.command == "op":
            return _cmd_op(args, settings)
    except ConfigError as err:
        return _fail(2, err)
    except ValueError as err:
        return _fail(2, err)
    except _INPUT_ERRORS as err:
        return _fail(1, err)
    except json.JSONDecodeError as err:
        return _fail(1, err)
    raise AssertionError(f"unhandled command {args.command!r}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
