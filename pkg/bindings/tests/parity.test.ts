import { readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, dirname } from "node:path";
import { mkdtempSync } from "node:fs";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import {
  OpError,
  canonicalJson,
  dumpDataset,
  enumerateExtensions,
  kendallTau,
  loadDataset,
  opRaw,
  reorderSolution,
  shufflePremises,
  tfi,
  type DatasetRecordJson,
  type DepsMap,
  type JsonValue,
  type SolutionJson,
} from "../src/index.js";

interface Case {
  name: string;
  op: string;
  payload: Record<string, JsonValue>;
  raw: string;
}

interface ErrorCase {
  name: string;
  op: string;
  payload: Record<string, JsonValue>;
  code: string;
}

const fixturesDir = join(dirname(dirname(fileURLToPath(import.meta.url))), "fixtures");
const expected = JSON.parse(readFileSync(join(fixturesDir, "expected.json"), "utf-8")) as {
  cases: Case[];
  errors: ErrorCase[];
};

function byOp(op: string): Case[] {
  return expected.cases.filter((c) => c.op === op);
}

/** Run the typed wrapper matching a fixture case on the case's inputs. */
async function boundResult(c: Case): Promise<unknown> {
  const p = c.payload as Record<string, unknown>;
  switch (c.op) {
    case "kendall-tau":
      return kendallTau(p.sequence as number[]);
    case "tfi":
      return tfi(p.deps as DepsMap);
    case "enumerate-extensions":
      return enumerateExtensions(p.deps as DepsMap, p.cap as number | undefined);
    case "shuffle-premises":
      return shufflePremises(p.record as DatasetRecordJson, {
        seed: p.seed as number,
        k: p.k as number,
        mode: p.mode as string,
      });
    case "reorder-solution":
      return reorderSolution(
        p.solution as SolutionJson,
        p.ordering as number[],
        p.instance_id as string,
      );
    default:
      throw new Error(`fixture names unknown op ${c.op}`);
  }
}

/** The part of the parsed core response the wrapper is expected to return. */
function coreResult(c: Case): unknown {
  const parsed = JSON.parse(c.raw) as Record<string, unknown>;
  if (c.op === "shuffle-premises") return parsed.records;
  if (c.op === "reorder-solution") return parsed.solution;
  return parsed;
}

describe("bit-for-bit parity with the core", () => {
  // the raw response line must equal the core-computed fixture exactly;
  // this covers serialization, not just value equality
  for (const c of expected.cases) {
    it(`raw: ${c.name}`, async () => {
      expect(await opRaw(c.op, c.payload)).toBe(c.raw);
    });
  }
});

describe("typed wrappers", () => {
  for (const c of expected.cases) {
    it(`wrapper: ${c.name}`, async () => {
      expect(await boundResult(c)).toStrictEqual(coreResult(c));
    });
  }

  it("covers all five operations", () => {
    const ops = new Set(expected.cases.map((c) => c.op));
    expect([...ops].sort()).toStrictEqual([
      "enumerate-extensions",
      "kendall-tau",
      "reorder-solution",
      "shuffle-premises",
      "tfi",
    ]);
  });

  it("kendall tau of the identity is 1.0", async () => {
    const result = await kendallTau([1, 2, 3, 4, 5]);
    expect(result.tau).toBe(1);
    expect(result.exact).toBe("1/1");
  });

  it("tfi of the reference DAG is 2/24", async () => {
    const result = await tfi({ "1": [], "2": [], "3": [1, 2], "4": [3] });
    expect(result.exact).toBe("1/12");
    expect(result.extensions).toBe(2);
    expect(result.tfi).toBeCloseTo(2 / 24, 12);
  });

  it("a chain admits exactly one ordering", async () => {
    const result = await enumerateExtensions({ "1": [], "2": [1], "3": [2], "4": [3] });
    expect(result.orderings).toStrictEqual([[1, 2, 3, 4]]);
    expect(result.exact_count).toBe(1);
    expect(result.truncated).toBe(false);
  });

  it("same seed, same draws; different seed, different draws", async () => {
    const record = (expected.cases.find((c) => c.name === "shuffle cat k=3 random")!
      .payload as Record<string, unknown>).record as DatasetRecordJson;
    const a = await shufflePremises(record, { seed: 99, k: 3 });
    const b = await shufflePremises(record, { seed: 99, k: 3 });
    const c = await shufflePremises(record, { seed: 100, k: 3 });
    expect(a).toStrictEqual(b);
    expect(JSON.stringify(a)).not.toBe(JSON.stringify(c));
  });
});

describe("errors carry the core's stable codes", () => {
  for (const e of expected.errors) {
    it(e.name, async () => {
      const err = await opRaw(e.op, e.payload).then(
        () => null,
        (x: unknown) => x,
      );
      expect(err).toBeInstanceOf(OpError);
      expect((err as OpError).code).toBe(e.code);
      expect((err as OpError).exitCode).toBe(1);
    });
  }
});

describe("canonical JSONL round trip", () => {
  it("loadDataset -> dumpDataset is byte-identical to the core's file", () => {
    const corpus = join(fixturesDir, "corpus.jsonl");
    const records = loadDataset(corpus);
    expect(records.length).toBeGreaterThan(0);
    const out = join(mkdtempSync(join(tmpdir(), "orderaug-bindings-")), "roundtrip.jsonl");
    dumpDataset(records, out);
    expect(readFileSync(out, "utf-8")).toBe(readFileSync(corpus, "utf-8"));
  });

  it("canonicalJson matches the core's serializer on every record line", () => {
    const lines = readFileSync(join(fixturesDir, "corpus.jsonl"), "utf-8")
      .split("\n")
      .filter((l) => l.length > 0);
    for (const line of lines) {
      expect(canonicalJson(JSON.parse(line) as JsonValue)).toBe(line);
    }
  });

  it("shuffled records re-serialize exactly as the core emitted them", async () => {
    // wrapper output -> canonicalJson must reproduce the raw fixture bytes
    const c = expected.cases.find((x) => x.name === "shuffle unicode quirks")!;
    const records = await shufflePremises(
      (c.payload as Record<string, unknown>).record as DatasetRecordJson,
      { seed: 3, k: 2, mode: "random" },
    );
    expect(canonicalJson({ records } as unknown as JsonValue)).toBe(c.raw);
  });
});
