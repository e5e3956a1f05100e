import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import type { JobRow } from "../src/wire.js";

export function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "cueaudit-adapter-"));
}

/** Synthetic jobs spread over three conditions, all keys distinct. */
export function makeJobs(n: number): JobRow[] {
  const conditions = ["per_warm", "per_blunt", "car_nurse"] as const;
  return Array.from({ length: n }, (_, i) => {
    const condition = conditions[i % conditions.length]!;
    return {
      condition_id: condition,
      instruction: `Use a voice matching someone ${condition.replace("_", " ")}.`,
      transcript_id: `trn_0${(i % 3) + 1}`,
      template_id: `tpl_0${(i % 2) + 1}`,
      transcript: "The quarterly figures are on your desk.",
      sample_index: Math.floor(i / conditions.length),
    };
  });
}

export function writeJobsFile(path: string, jobs: JobRow[]): void {
  const lines = jobs.map((job) =>
    JSON.stringify({
      condition_id: job.condition_id,
      instruction: job.instruction,
      transcript_id: job.transcript_id,
      template_id: job.template_id,
      transcript: job.transcript,
      sample_index: job.sample_index,
    }),
  );
  writeFileSync(path, lines.join("\n") + "\n", "utf-8");
}
