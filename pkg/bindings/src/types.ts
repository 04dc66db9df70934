/** JSON shapes shared with the core toolkit's canonical JSONL schema. */

export type JsonValue =
  | null
  | boolean
  | number
  | string
  | JsonValue[]
  | { [key: string]: JsonValue };

export interface StepJson {
  id: number;
  goal: string;
  premises_used: number[];
  steps_used: number[];
  result: string;
  text: string;
}

export interface SolutionJson {
  steps: StepJson[];
  final_answer: string;
}

export interface DatasetRecordJson {
  id: string;
  premises: string[];
  premises_fol: (string | null)[] | null;
  conclusion: string;
  conclusion_fol: string | null;
  label: string;
  label_set: string;
  solution: SolutionJson | null;
  lineage: string;
  source_id: string | null;
  permutation: number[] | null;
}

/** Step id -> prerequisite step ids ("step j consumes step i's result"). */
export type DepsMap = Record<string, number[]>;

export interface ExtensionSetJson {
  orderings: number[][];
  exact_count: number;
  truncated: boolean;
}

export interface TfiJson {
  /** extensions / m! as a float. */
  tfi: number;
  /** exact number of linear extensions. */
  extensions: number;
  /** exact value as "numerator/denominator". */
  exact: string;
}

export interface TauJson {
  /** Kendall tau as a float in [-1, 1]. */
  tau: number;
  /** exact value as "numerator/denominator". */
  exact: string;
}

export interface ShufflePremisesOptions {
  /** root RNG seed; required so every draw is reproducible. */
  seed: number;
  /** copies per instance (default 1). */
  k?: number;
  /** "random" or a half-open tau interval like "[-0.4,-0.2)". */
  mode?: string;
}
