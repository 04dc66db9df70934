/**
 * JSON-over-stdio bridge to the core toolkit.
 *
 * Every operation spawns `orderaug op <name>`, writes one JSON payload to
 * stdin, and reads one JSON line back, so the combinatorics have exactly one
 * implementation. Set ORDERAUG_BIN to override the executable (for example
 * "python3 -m orderaug").
 */

import { execFile } from "node:child_process";

import type { JsonValue } from "./types.js";

/** Structured failure from the core: carries the stable error code. */
export class OpError extends Error {
  readonly code: string;
  readonly exitCode: number;

  constructor(code: string, message: string, exitCode: number) {
    super(`${code}: ${message}`);
    this.name = "OpError";
    this.code = code;
    this.exitCode = exitCode;
  }
}

function bridgeCommand(): string[] {
  const raw = process.env.ORDERAUG_BIN ?? "orderaug";
  const parts = raw.split(/\s+/).filter(Boolean);
  if (parts.length === 0) {
    throw new Error("ORDERAUG_BIN is set but empty");
  }
  return parts;
}

function parseFailure(stderr: string, exitCode: number): OpError {
  // the core prints one {"error", "message"} JSON line as its last word
  const lines = stderr.split("\n").filter((l) => l.trim().length > 0);
  const last = lines[lines.length - 1];
  if (last !== undefined) {
    try {
      const obj = JSON.parse(last) as { error?: string; message?: string };
      if (typeof obj.error === "string") {
        return new OpError(obj.error, obj.message ?? "", exitCode);
      }
    } catch {
      // fall through to the raw-text error below
    }
  }
  return new OpError("BridgeFailure", stderr.trim() || "no diagnostics", exitCode);
}

/**
 * Run one bridge operation and return the raw response line exactly as the
 * core serialized it (trailing newline stripped).
 */
export function opRaw(name: string, payload: unknown): Promise<string> {
  const [command, ...prefix] = bridgeCommand();
  return new Promise((resolve, reject) => {
    const child = execFile(
      command as string,
      [...prefix, "op", name],
      { maxBuffer: 256 * 1024 * 1024 },
      (err, stdout, stderr) => {
        if (err) {
          const exitCode = typeof err.code === "number" ? err.code : -1;
          reject(parseFailure(stderr, exitCode));
          return;
        }
        resolve(stdout.endsWith("\n") ? stdout.slice(0, -1) : stdout);
      },
    );
    child.stdin?.end(JSON.stringify(payload));
  });
}

/** Run one bridge operation and parse its response. */
export async function op<T>(name: string, payload: unknown): Promise<T> {
  return JSON.parse(await opRaw(name, payload)) as T;
}

const ESCAPES: Record<string, string> = {
  '"': '\\"',
  "\\": "\\\\",
  "\b": "\\b",
  "\f": "\\f",
  "\n": "\\n",
  "\r": "\\r",
  "\t": "\\t",
};

function quote(s: string): string {
  let out = '"';
  for (const ch of s) {
    const esc = ESCAPES[ch];
    if (esc !== undefined) {
      out += esc;
    } else if (ch < " ") {
      out += "\\u" + ch.codePointAt(0)!.toString(16).padStart(4, "0");
    } else {
      out += ch;
    }
  }
  return out + '"';
}

/**
 * Serialize exactly like the core's JSONL writer: ", " and ": " separators,
 * keys in insertion order, no ASCII escaping. Round trips the canonical
 * record schema byte-for-byte (its numbers are all integers; non-integral
 * floats format identically in both runtimes, but integral floats would lose
 * their ".0" here).
 */
export function canonicalJson(value: JsonValue): string {
  if (value === null || typeof value === "boolean") {
    return value === null ? "null" : value ? "true" : "false";
  }
  if (typeof value === "number") {
    if (!Number.isFinite(value)) {
      throw new TypeError(`non-finite number ${value} has no JSON form`);
    }
    return String(value);
  }
  if (typeof value === "string") {
    return quote(value);
  }
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalJson).join(", ") + "]";
  }
  const parts = Object.entries(value).map(([k, v]) => `${quote(k)}: ${canonicalJson(v)}`);
  return "{" + parts.join(", ") + "}";
}
