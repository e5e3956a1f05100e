/**
 * Adapter run configuration. Model and classifier are selected by id and
 * must resolve before any synthesis starts; everything else tunes how the
 * run is executed and is echoed into the run summary alongside the ledger.
 */

import { readFileSync } from "node:fs";

import { z } from "zod";

import { SchemaViolation } from "./errors.js";

export const AdapterConfigSchema = z
  .object({
    model: z.string().default("mock-itts"),
    classifier: z.string().default("mock-gender-classifier"),
    device: z.string().default("cpu"),
    batch_size: z.number().int().min(1).default(16),
    samples_per_job: z.number().int().min(1).default(1),
    temperature: z.number().min(0).default(0),
  })
  .strict();

export type AdapterConfig = z.infer<typeof AdapterConfigSchema>;

export function defaultConfig(): AdapterConfig {
  return AdapterConfigSchema.parse({});
}

/** Load a JSON config file, or the defaults when no path is given. */
export function loadAdapterConfig(path?: string): AdapterConfig {
  if (path === undefined) return defaultConfig();
  let doc: unknown;
  try {
    doc = JSON.parse(readFileSync(path, "utf-8"));
  } catch (exc) {
    throw new SchemaViolation(`${path}: not valid JSON: ${(exc as Error).message}`);
  }
  const parsed = AdapterConfigSchema.safeParse(doc);
  if (!parsed.success) {
    const first = parsed.error.issues[0];
    const at = first && first.path.length > 0 ? ` at ${first.path.join(".")}` : "";
    throw new SchemaViolation(`${path}: ${first?.message ?? "invalid config"}${at}`);
  }
  return parsed.data;
}
