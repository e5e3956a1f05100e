/**
 * The core toolkit's line-delimited wire formats, from the consumer side.
 *
 * Three contracts: the job manifest the core hands us, the utterance
 * ledger we hand back, and the embedding file for encoder probes. Field
 * names, field order, and the version tag must match the core exactly —
 * these files are the only interface between the two packages.
 */

import { readFileSync } from "node:fs";

import { SchemaViolation } from "./errors.js";

export const LEDGER_VERSION = 1;
export const EMBEDDING_FORMAT = "cueaudit-embeddings";
export const EMBEDDING_VERSION = 1;

const JOB_FIELDS = [
  "condition_id",
  "instruction",
  "transcript_id",
  "template_id",
  "transcript",
  "sample_index",
] as const;

/** One instruction to synthesize, as enumerated by the core. */
export interface JobRow {
  condition_id: string;
  instruction: string;
  transcript_id: string;
  template_id: string;
  transcript: string;
  sample_index: number;
}

/** One classified utterance, as the core's ledger reader expects it. */
export interface LedgerRow {
  version: number;
  condition_id: string;
  sample_index: number;
  template_id: string;
  transcript_id: string;
  female_prob: number;
}

function parseLine(line: string, where: string): Record<string, unknown> {
  let row: unknown;
  try {
    row = JSON.parse(line);
  } catch (exc) {
    throw new SchemaViolation(`${where}: not valid JSON: ${(exc as Error).message}`);
  }
  if (typeof row !== "object" || row === null || Array.isArray(row)) {
    throw new SchemaViolation(`${where}: each line must be a JSON object`);
  }
  return row as Record<string, unknown>;
}

function isIndex(value: unknown): value is number {
  return typeof value === "number" && Number.isInteger(value) && value >= 0;
}

export function parseJobRow(row: Record<string, unknown>, where: string): JobRow {
  const missing = JOB_FIELDS.filter((f) => !(f in row));
  if (missing.length > 0) {
    throw new SchemaViolation(`${where}: missing fields [${missing.join(", ")}]`);
  }
  for (const field of JOB_FIELDS) {
    if (field === "sample_index") continue;
    if (typeof row[field] !== "string") {
      throw new SchemaViolation(`${where}: ${field} must be a string`);
    }
  }
  if (!isIndex(row.sample_index)) {
    throw new SchemaViolation(`${where}: sample_index must be a non-negative integer`);
  }
  // Extra fields are tolerated, as in the core's reader.
  return {
    condition_id: row.condition_id as string,
    instruction: row.instruction as string,
    transcript_id: row.transcript_id as string,
    template_id: row.template_id as string,
    transcript: row.transcript as string,
    sample_index: row.sample_index,
  };
}

/** Read and validate a whole job manifest. */
export function readJobs(path: string): JobRow[] {
  const text = readFileSync(path, "utf-8");
  const jobs: JobRow[] = [];
  let lineno = 0;
  for (const raw of text.split("\n")) {
    lineno += 1;
    const line = raw.trim();
    if (line === "") continue;
    jobs.push(parseJobRow(parseLine(line, `${path}:${lineno}`), `${path}:${lineno}`));
  }
  return jobs;
}

/** Serialize one ledger record with the core's exact field order. */
export function ledgerLine(row: Omit<LedgerRow, "version">): string {
  return JSON.stringify({
    version: LEDGER_VERSION,
    condition_id: row.condition_id,
    sample_index: row.sample_index,
    template_id: row.template_id,
    transcript_id: row.transcript_id,
    female_prob: row.female_prob,
  });
}

const LEDGER_FIELDS = [
  "version",
  "condition_id",
  "sample_index",
  "template_id",
  "transcript_id",
  "female_prob",
] as const;

/** Parse one ledger line; used when resuming over a partial output file. */
export function parseLedgerLine(line: string, where: string): LedgerRow {
  const row = parseLine(line, where);
  if (row.version !== LEDGER_VERSION) {
    throw new SchemaViolation(
      `${where}: ledger version must be ${LEDGER_VERSION}, got ${JSON.stringify(row.version)}`,
    );
  }
  const unknown = Object.keys(row).filter(
    (k) => !(LEDGER_FIELDS as readonly string[]).includes(k),
  );
  if (unknown.length > 0) {
    throw new SchemaViolation(`${where}: unknown fields [${unknown.join(", ")}]`);
  }
  const missing = LEDGER_FIELDS.filter((f) => !(f in row));
  if (missing.length > 0) {
    throw new SchemaViolation(`${where}: missing fields [${missing.join(", ")}]`);
  }
  if (!isIndex(row.sample_index)) {
    throw new SchemaViolation(`${where}: sample_index must be a non-negative integer`);
  }
  let prob = row.female_prob;
  if (typeof prob === "string") {
    const label = prob.trim().toLowerCase();
    if (label === "female") prob = 1.0;
    else if (label === "male") prob = 0.0;
    else throw new SchemaViolation(`${where}: unknown gender label ${JSON.stringify(prob)}`);
  }
  if (typeof prob !== "number" || !Number.isFinite(prob)) {
    throw new SchemaViolation(`${where}: female_prob must be a number or Female/Male`);
  }
  return {
    version: LEDGER_VERSION,
    condition_id: String(row.condition_id),
    sample_index: row.sample_index,
    template_id: String(row.template_id),
    transcript_id: String(row.transcript_id),
    female_prob: prob,
  };
}

/** One contextualized vector bound for an embedding file. */
export interface EmbeddingRow {
  key: string;
  context_tag: string | null;
  vector: number[];
}

/** Serialize a complete embedding file (header line + one row per line). */
export function embeddingFileText(encoder: string, rows: EmbeddingRow[]): string {
  if (rows.length === 0) {
    throw new SchemaViolation("refusing to write an embedding file with no records");
  }
  const dimension = rows[0]!.vector.length;
  const lines = [
    JSON.stringify({
      format: EMBEDDING_FORMAT,
      version: EMBEDDING_VERSION,
      encoder,
      dimension,
      count: rows.length,
    }),
  ];
  for (const row of rows) {
    if (row.vector.length !== dimension) {
      throw new SchemaViolation(
        `record ${JSON.stringify(row.key)} has dimension ${row.vector.length}, ` +
          `file dimension is ${dimension}`,
      );
    }
    if (!row.vector.every((x) => Number.isFinite(x))) {
      throw new SchemaViolation(`record ${JSON.stringify(row.key)} has a non-finite component`);
    }
    lines.push(
      JSON.stringify({ key: row.key, context_tag: row.context_tag, vector: row.vector }),
    );
  }
  return lines.join("\n") + "\n";
}
