"""Three-stage solution generation against a chat-completion endpoint.

Stage 1 fills in FOL renderings of premises and conclusion, stage 2
generates a step-by-step solution conditioned on the ground-truth label,
stage 3 extracts per-step dependencies. Results land in an append-only
JSONL journal keyed by instance id, so interrupted runs resume without
re-requesting finished instances. A file-backed mock endpoint (base URL
scheme ``mock:``) replays canned responses for offline runs and tests.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Protocol, Sequence

import requests

from .errors import OrderAugError
from .ingest import DatasetRecord, record_from_json, record_to_json
from .model import Instance, LabelSet, Solution, Step, validate_solution
from .fol import ParseError, parse_fol
from .prompts import (
    PromptTemplate,
    dependency_inputs,
    fol_conversion_inputs,
    solution_inputs,
)
from .stepdag import build_dag

__all__ = [
    "EndpointError",
    "ResponseFormatError",
    "FolParseFailure",
    "NoStepsFound",
    "LabelMismatch",
    "ListingMismatch",
    "NoListingFound",
    "BadLine",
    "RetryPolicy",
    "EndpointConfig",
    "Endpoint",
    "HttpEndpoint",
    "FileMockEndpoint",
    "make_endpoint",
    "prompt_key",
    "find_stated_label",
    "split_solution_text",
    "convert_to_fol",
    "generate_solution",
    "parse_dependency_listing",
    "extract_dependencies",
    "attach_dependencies",
    "JournalEntry",
    "read_journal",
    "PipelineResult",
    "run_pipeline",
]


class EndpointError(OrderAugError):
    code = "EndpointError"


class ResponseFormatError(OrderAugError):
    code = "ResponseFormatError"

    def __init__(self, section: str, detail: str = ""):
        self.section = section
        msg = f"missing or malformed section {section!r}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class FolParseFailure(OrderAugError):
    code = "FolParseFailure"

    def __init__(self, index: int, detail: str):
        self.index = index
        super().__init__(f"FOL for premise {index} does not parse: {detail}")


class NoStepsFound(OrderAugError):
    code = "NoStepsFound"


class LabelMismatch(OrderAugError):
    code = "LabelMismatch"

    def __init__(self, stated: str | None, expected: str):
        self.stated = stated
        self.expected = expected
        super().__init__(f"solution states {stated!r}, expected {expected!r}")


class ListingMismatch(OrderAugError):
    code = "ListingMismatch"

    def __init__(self, expected: int, got: Sequence[int]):
        self.expected = expected
        self.got = tuple(got)
        super().__init__(
            f"listing covers steps {list(self.got)}, solution has steps 1..{expected}"
        )


class NoListingFound(OrderAugError):
    code = "NoListingFound"


class BadLine(OrderAugError):
    code = "BadLine"

    def __init__(self, line: int, detail: str):
        self.line = line
        super().__init__(f"listing line {line}: {detail}")


# ---------------------------------------------------------------------------
# Endpoint configuration and transports.


@dataclass(frozen=True)
class RetryPolicy:
    max_retries: int = 3
    backoff_base: float = 0.5

    def __post_init__(self):
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.backoff_base < 0:
            raise ValueError("backoff_base must be >= 0")


@dataclass(frozen=True)
class EndpointConfig:
    base_url: str
    model: str = "gpt-4o-mini"
    api_key_env: str = "ORDERAUG_API_KEY"
    max_concurrency: int = 4
    timeout: float = 60.0
    retry: RetryPolicy = field(default_factory=RetryPolicy)
    extraction_temperature: float = 0.0
    solution_temperature: float = 0.7
    regen_budget: int = 3
    # "retry" burns regeneration budget on a wrong stated label; "drop"
    # quarantines the instance on the first mismatch.
    on_label_mismatch: str = "retry"

    def __post_init__(self):
        if self.max_concurrency < 1:
            raise ValueError("max_concurrency must be >= 1")
        if self.timeout <= 0:
            raise ValueError("timeout must be > 0")
        if self.regen_budget < 1:
            raise ValueError("regen_budget must be >= 1")
        if self.on_label_mismatch not in ("retry", "drop"):
            raise ValueError("on_label_mismatch must be 'retry' or 'drop'")


class Endpoint(Protocol):
    def complete(self, prompt: str, temperature: float = 0.0) -> str: ...


def prompt_key(prompt: str) -> str:
    """Stable lookup key for a prompt; mock fixtures are keyed by this."""
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class HttpEndpoint:
    """Chat-completions JSON-over-HTTP transport with retry and backoff."""

    def __init__(self, cfg: EndpointConfig):
        self.cfg = cfg
        self.url = cfg.base_url.rstrip("/") + "/chat/completions"
        self.api_key = os.environ.get(cfg.api_key_env)

    def complete(self, prompt: str, temperature: float = 0.0) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {
            "model": self.cfg.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": temperature,
        }
        retry = self.cfg.retry
        last_error = "no attempts made"
        for attempt in range(retry.max_retries + 1):
            if attempt:
                time.sleep(retry.backoff_base * (2 ** (attempt - 1)))
            try:
                resp = requests.post(
                    self.url, json=payload, headers=headers, timeout=self.cfg.timeout
                )
            except requests.RequestException as err:
                last_error = str(err)
                continue
            if resp.status_code == 429 or resp.status_code >= 500:
                last_error = f"HTTP {resp.status_code}"
                continue
            if resp.status_code != 200:
                raise EndpointError(f"HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                return resp.json()["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as err:
                raise EndpointError(f"unexpected response shape: {err}") from err
        raise EndpointError(f"gave up after {retry.max_retries + 1} attempts: {last_error}")


class FileMockEndpoint:
    """Replays canned responses from a JSON file, keyed by prompt hash.

    A fixture value may be a string or a list of strings; lists are
    consumed one per call (the last repeats), which lets tests script
    bad-then-good retry sequences. Every request is appended to a side
    log so tests can count traffic.
    """

    def __init__(self, path: Path | str, log_requests: bool = True):
        self.path = Path(path)
        with open(self.path, encoding="utf-8") as fh:
            self.responses: dict[str, Any] = json.load(fh)
        self.log_path = self.path.with_suffix(self.path.suffix + ".log") if log_requests else None
        self._calls: dict[str, int] = {}
        self._lock = threading.Lock()

    def complete(self, prompt: str, temperature: float = 0.0) -> str:
        key = prompt_key(prompt)
        with self._lock:
            n = self._calls.get(key, 0)
            self._calls[key] = n + 1
            if self.log_path is not None:
                with open(self.log_path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps({"key": key}) + "\n")
        if key not in self.responses:
            head = prompt.splitlines()[0][:80] if prompt else ""
            raise EndpointError(f"no canned response for key {key} (prompt starts {head!r})")
        value = self.responses[key]
        if isinstance(value, list):
            if not value:
                raise EndpointError(f"empty response list for key {key}")
            return str(value[min(n, len(value) - 1)])
        return str(value)


def make_endpoint(cfg: EndpointConfig) -> Endpoint:
    if cfg.base_url.startswith("mock:"):
        path = cfg.base_url[len("mock:"):]
        if path.startswith("//"):
            path = path[2:]
        return FileMockEndpoint(path)
    return HttpEndpoint(cfg)


# ---------------------------------------------------------------------------
# Stage 1: FOL conversion.

_SECTION_RE = re.compile(
    r"^\s*(?:\*\*)?\s*(Premises-FOL|Hypothesis-FOL)\s*(?:\*\*)?\s*:\s*(?:\*\*)?\s*$",
    re.IGNORECASE | re.MULTILINE,
)


def _split_sections(text: str) -> dict[str, list[str]]:
    sections: dict[str, list[str]] = {}
    matches = list(_SECTION_RE.finditer(text))
    for i, m in enumerate(matches):
        end = matches[i + 1].start() if i + 1 < len(matches) else len(text)
        body = text[m.end():end]
        lines = [ln.strip() for ln in body.splitlines() if ln.strip()]
        sections[m.group(1).lower()] = lines
    return sections


_LEADING_INDEX_RE = re.compile(r"^\s*\d+\s*[.):]\s*")


def _strip_leading_index(line: str) -> str:
    return _LEADING_INDEX_RE.sub("", line).strip()


def convert_to_fol(
    inst: Instance,
    endpoint: Endpoint,
    template: PromptTemplate | None = None,
    temperature: float = 0.0,
) -> Instance:
    """Fill premises_fol and conclusion_fol from the endpoint's rendering.

    Instances already carrying FOL everywhere pass through unchanged.
    """
    if all(p.fol is not None for p in inst.premises) and inst.conclusion_fol is not None:
        return inst
    template = template or PromptTemplate.for_stage("fol_conversion")
    prompt = template.render(**fol_conversion_inputs(inst))
    text = endpoint.complete(prompt, temperature=temperature)
    sections = _split_sections(text)
    if "premises-fol" not in sections:
        raise ResponseFormatError("Premises-FOL")
    if "hypothesis-fol" not in sections:
        raise ResponseFormatError("Hypothesis-FOL")
    premise_fols = [_strip_leading_index(ln) for ln in sections["premises-fol"]]
    if len(premise_fols) != inst.n:
        raise ResponseFormatError(
            "Premises-FOL", f"{len(premise_fols)} lines for {inst.n} premises"
        )
    hypothesis_lines = [_strip_leading_index(ln) for ln in sections["hypothesis-fol"]]
    if len(hypothesis_lines) != 1:
        raise ResponseFormatError("Hypothesis-FOL", f"{len(hypothesis_lines)} lines, expected 1")
    for i, fol in enumerate(premise_fols, start=1):
        try:
            parse_fol(fol)
        except ParseError as err:
            raise FolParseFailure(i, str(err)) from err
    try:
        parse_fol(hypothesis_lines[0])
    except ParseError as err:
        raise FolParseFailure(0, str(err)) from err
    new_premises = tuple(
        replace(p, fol=fol) for p, fol in zip(inst.premises, premise_fols)
    )
    return replace(inst, premises=new_premises, conclusion_fol=hypothesis_lines[0])


# ---------------------------------------------------------------------------
# Stage 2: step-by-step solution generation.

_STEP_HEADER_RE = re.compile(
    r"^[ \t]*(?:\*\*)?[ \t]*Step\s+(\d+)\s*[:.][ \t]*", re.IGNORECASE | re.MULTILINE
)
_FINAL_HEADER_RE = re.compile(
    r"^[ \t]*(?:\*\*)?[ \t]*Final\b[^:\n]{0,60}:[ \t]*", re.IGNORECASE | re.MULTILINE
)


def _clean_line(line: str) -> str:
    return line.replace("**", "").strip()


def split_solution_text(text: str) -> tuple[list[tuple[int, str, str]], str]:
    """Segment raw solution text on "Step N:" headers.

    Returns ([(id, goal, block)], final_section). The block includes the
    header line; prose before the first header is dropped. The final
    section is what follows a "Final ...:" header, or the last step's
    closing line when no such header exists.
    """
    headers = list(_STEP_HEADER_RE.finditer(text))
    if not headers:
        raise NoStepsFound("no 'Step N:' headers in solution text")
    final_match = None
    for m in _FINAL_HEADER_RE.finditer(text):
        if m.start() > headers[-1].start():
            final_match = m
            break
    end_of_steps = final_match.start() if final_match else len(text)
    steps: list[tuple[int, str, str]] = []
    for i, m in enumerate(headers):
        block_end = headers[i + 1].start() if i + 1 < len(headers) else end_of_steps
        block = text[m.start():block_end].strip()
        # slice the goal out of the original text: the stripped block may
        # have lost leading whitespace, which would shift offsets
        goal_lines = [ln for ln in text[m.end():block_end].splitlines() if ln.strip()]
        goal = _clean_line(goal_lines[0]) if goal_lines else ""
        steps.append((int(m.group(1)), goal, block))
    if final_match is not None:
        final = text[final_match.end():].strip()
    else:
        tail = [ln for ln in steps[-1][2].splitlines()[1:] if ln.strip()]
        final = _clean_line(tail[-1]) if tail else ""
    return steps, _clean_line(final) if "\n" not in final else final.strip()


def find_stated_label(text: str, label_set: LabelSet) -> str | None:
    """Last label-set value stated in the text, longest match wins."""
    ordered = sorted(label_set.values, key=len, reverse=True)
    pattern = "|".join(re.escape(v) for v in ordered)
    matches = list(re.finditer(rf"\b(?:{pattern})\b", text, re.IGNORECASE))
    if not matches:
        return None
    stated = matches[-1].group(0).lower()
    for value in ordered:
        if value.lower() == stated:
            return value
    return None


def generate_solution(
    inst: Instance,
    endpoint: Endpoint,
    template: PromptTemplate | None = None,
    temperature: float = 0.7,
) -> tuple[str, Solution]:
    """Generate and segment a solution; dependencies are left empty.

    Returns the raw response text (stage 3 needs it verbatim) and the
    parsed Solution. The final section must restate the ground-truth
    label or the attempt is rejected.
    """
    template = template or PromptTemplate.for_stage("solution_generation", inst.label_set)
    prompt = template.render(**solution_inputs(inst))
    text = endpoint.complete(prompt, temperature=temperature)
    raw_steps, final = split_solution_text(text)
    ids = [sid for sid, _, _ in raw_steps]
    if ids != list(range(1, len(ids) + 1)):
        raise ResponseFormatError("steps", f"headers numbered {ids}, expected 1..{len(ids)}")
    stated = find_stated_label(final, inst.label_set)
    if stated is None or stated != inst.label:
        raise LabelMismatch(stated, inst.label)
    steps = []
    for sid, goal, block in raw_steps:
        body = [ln for ln in block.splitlines()[1:] if ln.strip()]
        result = _clean_line(body[-1]) if body else goal
        steps.append(
            Step(
                id=sid,
                goal=goal,
                premises_used=frozenset(),
                steps_used=frozenset(),
                result=result,
                text=block,
            )
        )
    return text, Solution(instance_id=inst.id, steps=tuple(steps), final_answer=final)


# ---------------------------------------------------------------------------
# Stage 3: dependency extraction.

_ENTRY_START_RE = re.compile(r"(?<![a-z])step\s+([^\s:]+)\s*:", re.IGNORECASE)
_REF_RE = re.compile(r"^(condition|step)\s+(\d+)$", re.IGNORECASE)


def parse_dependency_listing(text: str) -> dict[int, tuple[frozenset[int], frozenset[int]]]:
    """Parse a dependency listing into step id -> (conditions, steps).

    Entries follow ``step <int>: <ref>, <ref>, ...`` where a ref is
    ``condition <int>``, ``step <int>``, or the word ``none``. Entries
    may share a line separated by ``;``. Prose before the first entry
    and after the last is ignored.
    """
    out: dict[int, tuple[frozenset[int], frozenset[int]]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        starts = list(_ENTRY_START_RE.finditer(line))
        if not starts:
            continue
        for i, m in enumerate(starts):
            raw_id = m.group(1)
            if not raw_id.isdigit():
                raise BadLine(lineno, f"non-numeric step id {raw_id!r}")
            step_id = int(raw_id)
            if step_id in out:
                raise BadLine(lineno, f"duplicate entry for step {step_id}")
            end = starts[i + 1].start() if i + 1 < len(starts) else len(line)
            rhs = line[m.end():end].strip().rstrip(";,.").strip()
            conditions: set[int] = set()
            steps: set[int] = set()
            if rhs.lower() not in ("none", "none needed", ""):
                for part in re.split(r"[,;]", rhs):
                    part = part.strip().rstrip(".")
                    if not part:
                        continue
                    ref = _REF_RE.match(part)
                    if ref is None:
                        raise BadLine(lineno, f"unrecognized reference {part!r}")
                    target = int(ref.group(2))
                    if ref.group(1).lower() == "condition":
                        conditions.add(target)
                    else:
                        steps.add(target)
            out[step_id] = (frozenset(conditions), frozenset(steps))
    if not out:
        raise NoListingFound("no 'step N:' entries found")
    return out


def attach_dependencies(
    solution: Solution,
    listing: Mapping[int, tuple[frozenset[int], frozenset[int]]],
) -> Solution:
    ids = sorted(listing)
    if ids != [s.id for s in solution.steps]:
        raise ListingMismatch(solution.m, ids)
    steps = tuple(
        replace(s, premises_used=listing[s.id][0], steps_used=listing[s.id][1])
        for s in solution.steps
    )
    return replace(solution, steps=steps)


def extract_dependencies(
    inst: Instance,
    solution_text: str,
    solution: Solution,
    endpoint: Endpoint,
    template: PromptTemplate | None = None,
    temperature: float = 0.0,
) -> Solution:
    """Ask the endpoint for per-step dependencies and attach them."""
    template = template or PromptTemplate.for_stage("dependency_extraction")
    prompt = template.render(**dependency_inputs(inst, solution_text))
    text = endpoint.complete(prompt, temperature=temperature)
    return attach_dependencies(solution, parse_dependency_listing(text))


# ---------------------------------------------------------------------------
# Journal and batch driver.


@dataclass(frozen=True)
class JournalEntry:
    record: DatasetRecord
    status: str  # "ok" or "quarantined"
    diagnostics: tuple[str, ...] = ()


def read_journal(path: Path | str) -> dict[str, JournalEntry]:
    """Load journaled entries keyed by instance id; missing file is empty."""
    path = Path(path)
    if not path.exists():
        return {}
    entries: dict[str, JournalEntry] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            obj = json.loads(line)
            status = obj.pop("status", "ok")
            diagnostics = tuple(obj.pop("diagnostics", ()))
            record = record_from_json(obj, line=lineno)
            entries[record.instance.id] = JournalEntry(record, status, diagnostics)
    return entries


def _journal_line(entry: JournalEntry) -> str:
    obj = record_to_json(entry.record)
    obj["status"] = entry.status
    if entry.diagnostics:
        obj["diagnostics"] = list(entry.diagnostics)
    return json.dumps(obj, ensure_ascii=False)


@dataclass(frozen=True)
class PipelineResult:
    processed: int
    skipped: int
    quarantined: int
    quarantined_ids: tuple[str, ...]
    request_errors: tuple[str, ...] = ()


_STAGE_ERRORS = (
    ResponseFormatError,
    FolParseFailure,
    NoStepsFound,
    LabelMismatch,
    ListingMismatch,
    NoListingFound,
    BadLine,
    OrderAugError,
)


def _process_instance(
    record: DatasetRecord, endpoint: Endpoint, cfg: EndpointConfig
) -> JournalEntry:
    inst = record.instance
    diagnostics: list[str] = []

    def with_budget(stage: Callable[[], Any], stop_on: tuple = ()) -> Any:
        for _ in range(cfg.regen_budget):
            try:
                return stage()
            except _STAGE_ERRORS as err:
                diagnostics.append(f"{type(err).__name__}: {err}")
                if isinstance(err, stop_on):
                    return None
        return None

    converted = with_budget(
        lambda: convert_to_fol(inst, endpoint, temperature=cfg.extraction_temperature)
    )
    if converted is None:
        return JournalEntry(record, "quarantined", tuple(diagnostics))

    stop_on = (LabelMismatch,) if cfg.on_label_mismatch == "drop" else ()
    generated = with_budget(
        lambda: generate_solution(converted, endpoint, temperature=cfg.solution_temperature),
        stop_on=stop_on,
    )
    if generated is None:
        return JournalEntry(replace(record, instance=converted), "quarantined", tuple(diagnostics))
    solution_text, bare_solution = generated

    def extract_and_validate() -> Solution:
        solution = extract_dependencies(
            converted, solution_text, bare_solution, endpoint,
            temperature=cfg.extraction_temperature,
        )
        build_dag(solution)
        problems = [
            v for v in validate_solution(solution, converted) if v.severity == "error"
        ]
        if problems:
            raise ResponseFormatError("dependencies", "; ".join(str(v) for v in problems))
        return solution

    solution = with_budget(extract_and_validate)
    if solution is None:
        return JournalEntry(replace(record, instance=converted), "quarantined", tuple(diagnostics))
    return JournalEntry(
        replace(record, instance=converted, solution=solution), "ok", tuple(diagnostics)
    )


def run_pipeline(
    records: Iterable[DatasetRecord],
    cfg: EndpointConfig,
    journal_path: Path | str,
    endpoint: Endpoint | None = None,
) -> PipelineResult:
    """Run all three stages over a dataset, journaling incrementally.

    Already-journaled instance ids are skipped, so reruns after an
    interruption only touch unfinished instances. Per-instance failures
    are quarantined in the journal; the batch itself never aborts.
    """
    endpoint = endpoint or make_endpoint(cfg)
    journal_path = Path(journal_path)
    if journal_path.parent != Path(""):
        journal_path.parent.mkdir(parents=True, exist_ok=True)
    done = read_journal(journal_path)
    todo = []
    skipped = 0
    seen: set[str] = set()
    for record in records:
        rid = record.instance.id
        if rid in done or rid in seen:
            skipped += 1
            continue
        seen.add(rid)
        todo.append(record)

    processed = 0
    quarantined: list[str] = []
    errors: list[str] = []
    with open(journal_path, "a", encoding="utf-8") as journal:
        with ThreadPoolExecutor(max_workers=cfg.max_concurrency) as pool:
            futures = {
                pool.submit(_process_instance, record, endpoint, cfg): record
                for record in todo
            }
            for future in as_completed(futures):
                record = futures[future]
                try:
                    entry = future.result()
                except Exception as err:  # defensive: worker bugs must not kill the batch
                    entry = JournalEntry(
                        record, "quarantined", (f"{type(err).__name__}: {err}",)
                    )
                    errors.append(f"{record.instance.id}: {err}")
                journal.write(_journal_line(entry) + "\n")
                journal.flush()
                processed += 1
                if entry.status == "quarantined":
                    quarantined.append(entry.record.instance.id)
    return PipelineResult(
        processed=processed,
        skipped=skipped,
        quarantined=len(quarantined),
        quarantined_ids=tuple(sorted(quarantined)),
        request_errors=tuple(errors),
    )
