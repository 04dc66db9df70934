/**
 * Node bindings for the orderaug augmentation toolkit.
 *
 * Five operations (premise shuffling, linear-extension enumeration, TFI,
 * Kendall tau, solution reordering) delegate to the core over a JSON stdio
 * bridge; loadDataset/dumpDataset round trip the canonical JSONL schema
 * byte-for-byte. Seeds are explicit parameters everywhere randomness is
 * involved, so training pipelines stay reproducible.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { canonicalJson, op } from "./bridge.js";
import type {
  DatasetRecordJson,
  DepsMap,
  ExtensionSetJson,
  JsonValue,
  ShufflePremisesOptions,
  SolutionJson,
  TauJson,
  TfiJson,
} from "./types.js";

export { canonicalJson, op, opRaw, OpError } from "./bridge.js";
export type {
  DatasetRecordJson,
  DepsMap,
  ExtensionSetJson,
  JsonValue,
  ShufflePremisesOptions,
  SolutionJson,
  StepJson,
  TauJson,
  TfiJson,
} from "./types.js";

/**
 * Premise-shuffled copies of one record. Solutions travel along: their
 * premise citations are remapped through the permutation. Labels never
 * change.
 */
export async function shufflePremises(
  record: DatasetRecordJson,
  options: ShufflePremisesOptions,
): Promise<DatasetRecordJson[]> {
  const result = await op<{ records: DatasetRecordJson[] }>("shuffle-premises", {
    record,
    seed: options.seed,
    k: options.k ?? 1,
    mode: options.mode ?? "random",
  });
  return result.records;
}

/**
 * All dependency-respecting step orders of a DAG, up to `cap` listed
 * orderings; `exact_count` is never truncated.
 */
export async function enumerateExtensions(
  deps: DepsMap,
  cap?: number,
): Promise<ExtensionSetJson> {
  const payload: Record<string, unknown> = { deps };
  if (cap !== undefined) {
    payload.cap = cap;
  }
  return op<ExtensionSetJson>("enumerate-extensions", payload);
}

/** Topological Flexibility Index: linear extensions / m!, exactly. */
export async function tfi(deps: DepsMap): Promise<TfiJson> {
  return op<TfiJson>("tfi", { deps });
}

/** Kendall tau of a permutation against the identity order. */
export async function kendallTau(sequence: number[]): Promise<TauJson> {
  return op<TauJson>("kendall-tau", { sequence });
}

/**
 * Rewrite a solution along a different valid step order: steps are
 * renumbered positionally and prose references follow.
 */
export async function reorderSolution(
  solution: SolutionJson,
  ordering: number[],
  instanceId = "solution",
): Promise<SolutionJson> {
  const result = await op<{ solution: SolutionJson }>("reorder-solution", {
    solution,
    ordering,
    instance_id: instanceId,
  });
  return result.solution;
}

/** Read a canonical JSONL dataset. */
export function loadDataset(path: string): DatasetRecordJson[] {
  const text = readFileSync(path, "utf-8");
  return text
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as DatasetRecordJson);
}

/** Write records as canonical JSONL, byte-identical to the core's writer. */
export function dumpDataset(records: DatasetRecordJson[], path: string): void {
  const body = records
    .map((r) => canonicalJson(r as unknown as JsonValue) + "\n")
    .join("");
  writeFileSync(path, body, "utf-8");
}
