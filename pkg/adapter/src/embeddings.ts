/**
 * Contextual trait-embedding extraction.
 *
 * Each descriptor surface is rendered into every instruction template and
 * encoded in that context; the vectors of the descriptor's own token span
 * are mean-pooled into one row per (descriptor, template). Anchor words
 * are encoded bare, in the same space. The output is the core's embedding
 * file format, so descriptor keys here must match the audit lexicon's
 * condition ids.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { z } from "zod";

import { SchemaViolation } from "./errors.js";
import { resolveEncoder, type EncoderProvider } from "./providers.js";
import { embeddingFileText, type EmbeddingRow } from "./wire.js";

export const EmbeddingSpecSchema = z
  .object({
    encoder: z.string(),
    templates: z
      .array(z.object({ id: z.string(), text: z.string() }).strict())
      .min(1),
    descriptors: z
      .array(z.object({ key: z.string(), surface: z.string().min(1) }).strict())
      .min(1),
    anchors: z
      .object({
        female: z.array(z.string()).min(1),
        male: z.array(z.string()).min(1),
      })
      .strict(),
  })
  .strict();

export type EmbeddingSpec = z.infer<typeof EmbeddingSpecSchema>;

export function loadEmbeddingSpec(path: string): EmbeddingSpec {
  let doc: unknown;
  try {
    doc = JSON.parse(readFileSync(path, "utf-8"));
  } catch (exc) {
    throw new SchemaViolation(`${path}: not valid JSON: ${(exc as Error).message}`);
  }
  const parsed = EmbeddingSpecSchema.safeParse(doc);
  if (!parsed.success) {
    const first = parsed.error.issues[0];
    const at = first && first.path.length > 0 ? ` at ${first.path.join(".")}` : "";
    throw new SchemaViolation(`${path}: ${first?.message ?? "invalid spec"}${at}`);
  }
  return parsed.data;
}

function tokenize(text: string): string[] {
  return text.split(/\s+/).filter((t) => t !== "");
}

function meanPool(vectors: number[][]): number[] {
  const dimension = vectors[0]!.length;
  const pooled = new Array<number>(dimension).fill(0);
  for (const vector of vectors) {
    for (let j = 0; j < dimension; j++) pooled[j]! += vector[j]!;
  }
  return pooled.map((x) => x / vectors.length);
}

/**
 * Encode one surface inside one template and mean-pool its token span.
 * The template must contain the placeholder exactly once so the span is
 * unambiguous.
 */
export async function encodeInContext(
  encoder: EncoderProvider,
  templateText: string,
  surface: string,
): Promise<number[]> {
  const parts = templateText.split("{surface}");
  if (parts.length !== 2) {
    throw new SchemaViolation(
      `template ${JSON.stringify(templateText)} must contain {surface} exactly once`,
    );
  }
  const prefix = tokenize(parts[0]!);
  const span = tokenize(surface);
  const suffix = tokenize(parts[1]!);
  if (span.length === 0) {
    throw new SchemaViolation(`surface ${JSON.stringify(surface)} has no tokens`);
  }
  const vectors = await encoder.embedTokens([...prefix, ...span, ...suffix]);
  return meanPool(vectors.slice(prefix.length, prefix.length + span.length));
}

export interface ExtractResult {
  encoder: string;
  dimension: number;
  rows: number;
}

export async function extractEmbeddings(spec: EmbeddingSpec, outPath: string): Promise<ExtractResult> {
  const encoder = resolveEncoder(spec.encoder);
  await encoder.load();

  const rows: EmbeddingRow[] = [];
  for (const descriptor of spec.descriptors) {
    for (const template of spec.templates) {
      rows.push({
        key: descriptor.key,
        context_tag: template.id,
        vector: await encodeInContext(encoder, template.text, descriptor.surface),
      });
    }
  }
  for (const word of [...spec.anchors.female, ...spec.anchors.male]) {
    const [vector] = await encoder.embedTokens([word]);
    rows.push({ key: word, context_tag: null, vector: vector! });
  }

  writeFileSync(outPath, embeddingFileText(encoder.id, rows), "utf-8");
  return { encoder: encoder.id, dimension: encoder.dimension, rows: rows.length };
}
