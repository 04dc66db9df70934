"""Corpus statistics and run manifests.

Summaries are read-only: per-lineage record counts, premise- and
step-count distributions, a TFI histogram over stored solutions, and a
tau histogram over stored premise permutations. Output is JSON for
machines plus an aligned text table for eyes.
"""

from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

from .errors import IoError
from .ingest import DatasetFile, DatasetRecord, parse_dataset
from .permute import BUILTIN_BINS, kendall_tau_exact
from .stepdag import tfi_report
from .version import __version__

__all__ = [
    "TAU_BIN_LABELS",
    "tau_bin_label",
    "collect_stats",
    "RunManifest",
    "summarize",
    "format_stats_table",
]

# Tau histogram bins mirror the sampler's built-in 0.2-wide bins, with the
# top bin closed so tau = 1 has a home.
TAU_BIN_LABELS = tuple(
    f"[{float(b.lo):.1f},{float(b.hi):.1f}" + (")" if i < len(BUILTIN_BINS) - 1 else "]")
    for i, b in enumerate(BUILTIN_BINS)
)


def tau_bin_label(tau: Fraction) -> str:
    if tau == 1:
        return TAU_BIN_LABELS[-1]
    for b, label in zip(BUILTIN_BINS, TAU_BIN_LABELS):
        if b.contains(tau):
            return label
    raise ValueError(f"tau {tau} outside [-1, 1]")


def collect_stats(records: Sequence[DatasetRecord]) -> dict[str, Any]:
    """Aggregate corpus statistics into a JSON-ready mapping."""
    lineages = Counter(r.lineage for r in records)
    premise_counts = Counter(r.instance.n for r in records)
    step_counts = Counter(r.solution.m for r in records if r.solution is not None)

    tau_hist = {label: 0 for label in TAU_BIN_LABELS}
    n_perms = 0
    for r in records:
        if r.permutation is not None and r.permutation.n >= 2:
            tau_hist[tau_bin_label(kendall_tau_exact(r.permutation))] += 1
            n_perms += 1

    tfi = tfi_report(r.solution for r in records if r.solution is not None)
    return {
        "records": len(records),
        "lineages": {k: lineages[k] for k in sorted(lineages)},
        "premise_counts": {str(k): premise_counts[k] for k in sorted(premise_counts)},
        "step_counts": {str(k): step_counts[k] for k in sorted(step_counts)},
        "tau": {"permutations": n_perms, "histogram": tau_hist},
        "tfi": {
            "solutions": sum(tfi.histogram.values()),
            "histogram": dict(tfi.histogram),
            "percent": {k: round(v, 4) for k, v in tfi.percentages().items()},
            "failures": {k: tfi.failures[k] for k in sorted(tfi.failures)},
        },
    }


@dataclass(frozen=True)
class RunManifest:
    """What a run did: tool version, config, inputs/outputs, timing."""

    command: str
    seed: int | None
    config: dict[str, Any] = field(default_factory=dict)
    inputs: tuple[dict[str, Any], ...] = ()
    outputs: tuple[dict[str, Any], ...] = ()
    lineage_counts: dict[str, int] = field(default_factory=dict)
    elapsed_seconds: float = 0.0
    tool: str = "orderaug"
    version: str = __version__

    def to_json(self) -> dict[str, Any]:
        return {
            "tool": self.tool,
            "version": self.version,
            "command": self.command,
            "seed": self.seed,
            "config": self.config,
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "lineage_counts": self.lineage_counts,
            "elapsed_seconds": round(self.elapsed_seconds, 3),
        }


def _read_one(path: Path, fmt: str, on_error: str) -> list[DatasetRecord]:
    try:
        return parse_dataset(DatasetFile(path, fmt), on_error=on_error)
    except OSError as err:
        raise IoError(f"{path}: {err}") from err


def summarize(
    paths: Sequence[Path | str],
    fmt: str = "generic",
    on_error: str = "fail",
    config: Mapping[str, Any] | None = None,
) -> tuple[RunManifest, dict[str, Any]]:
    """Read datasets (in parallel) and aggregate one stats mapping."""
    started = time.perf_counter()
    paths = [Path(p) for p in paths]
    if not paths:
        per_file: list[list[DatasetRecord]] = []
    elif len(paths) == 1:
        per_file = [_read_one(paths[0], fmt, on_error)]
    else:
        with ThreadPoolExecutor(max_workers=min(8, len(paths))) as pool:
            per_file = list(pool.map(lambda p: _read_one(p, fmt, on_error), paths))
    records = [r for chunk in per_file for r in chunk]
    stats = collect_stats(records)
    manifest = RunManifest(
        command="analyze",
        seed=None,
        config=dict(config or {}),
        inputs=tuple(
            {"path": str(p), "records": len(chunk)} for p, chunk in zip(paths, per_file)
        ),
        outputs=(),
        lineage_counts=dict(stats["lineages"]),
        elapsed_seconds=time.perf_counter() - started,
    )
    return manifest, stats


def _rows_from_hist(hist: Mapping[str, int], indent: str = "  ") -> list[tuple[str, str]]:
    return [(f"{indent}{label}", str(count)) for label, count in hist.items() if count]


def format_stats_table(stats: Mapping[str, Any]) -> str:
    """Aligned two-column rendering of a stats mapping."""
    rows: list[tuple[str, str]] = [("records", str(stats["records"]))]
    rows += [(f"  lineage {k}", str(v)) for k, v in stats["lineages"].items()]
    if stats["premise_counts"]:
        rows.append(("premises per instance", ""))
        rows += [(f"  {k}", str(v)) for k, v in stats["premise_counts"].items()]
    if stats["step_counts"]:
        rows.append(("steps per solution", ""))
        rows += [(f"  {k}", str(v)) for k, v in stats["step_counts"].items()]
    rows.append(("stored permutations", str(stats["tau"]["permutations"])))
    rows += _rows_from_hist(stats["tau"]["histogram"], "  tau ")
    rows.append(("solutions with TFI", str(stats["tfi"]["solutions"])))
    rows += _rows_from_hist(stats["tfi"]["histogram"], "  tfi ")
    if stats["tfi"]["failures"]:
        rows.append(("tfi failures", str(len(stats["tfi"]["failures"]))))
    width = max(len(label) for label, _ in rows)
    return "\n".join(
        f"{label.ljust(width)}  {value}".rstrip() for label, value in rows
    )
