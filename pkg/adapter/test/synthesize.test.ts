import { existsSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { afterEach, describe, expect, it } from "vitest";

import { defaultConfig } from "../src/config.js";
import { ModelLoadFailure, SchemaViolation } from "../src/errors.js";
import {
  MockSynthesizer,
  registerClassifier,
  registerSynthesizer,
  unregisterProvider,
  type ClassifierProvider,
  type Waveform,
} from "../src/providers.js";
import { summaryPath, synthesizeAndClassify } from "../src/synthesize.js";
import { parseLedgerLine } from "../src/wire.js";
import { makeJobs, tempDir, writeJobsFile } from "./helpers.js";

function readLedgerRows(path: string) {
  return readFileSync(path, "utf-8")
    .trimEnd()
    .split("\n")
    .map((line, i) => parseLedgerLine(line, `${path}:${i + 1}`));
}

const registered: string[] = [];

function withClassifier(id: string, classify: (wave: Waveform) => Promise<number>) {
  registerClassifier(id, () => ({
    id,
    load: async () => {},
    classify,
  }));
  registered.push(id);
}

afterEach(() => {
  for (const id of registered.splice(0)) unregisterProvider(id);
});

describe("synthesize-and-classify", () => {
  it("emits one valid record per job, in job order", async () => {
    const dir = tempDir();
    const jobs = makeJobs(10);
    writeJobsFile(join(dir, "jobs.jsonl"), jobs);
    const ledger = join(dir, "ledger.jsonl");

    const summary = await synthesizeAndClassify(join(dir, "jobs.jsonl"), ledger, defaultConfig());

    expect(summary.jobs_seen).toBe(10);
    expect(summary.records_written).toBe(10);
    expect(summary.failures).toEqual([]);
    const rows = readLedgerRows(ledger);
    expect(rows.map((r) => [r.condition_id, r.sample_index])).toEqual(
      jobs.map((j) => [j.condition_id, j.sample_index]),
    );
    for (const row of rows) {
      expect(row.version).toBe(1);
      expect(row.female_prob).toBeGreaterThanOrEqual(0);
      expect(row.female_prob).toBeLessThanOrEqual(1);
    }
    expect(JSON.parse(readFileSync(summaryPath(ledger), "utf-8")).config.model).toBe("mock-itts");
  });

  it("is deterministic across runs", async () => {
    const dir = tempDir();
    writeJobsFile(join(dir, "jobs.jsonl"), makeJobs(8));
    await synthesizeAndClassify(join(dir, "jobs.jsonl"), join(dir, "a.jsonl"), defaultConfig());
    await synthesizeAndClassify(join(dir, "jobs.jsonl"), join(dir, "b.jsonl"), defaultConfig());
    expect(readFileSync(join(dir, "a.jsonl"), "utf-8")).toBe(
      readFileSync(join(dir, "b.jsonl"), "utf-8"),
    );
  });

  it("resumes after an interruption without duplicating records", async () => {
    const dir = tempDir();
    const jobs = makeJobs(10);
    writeJobsFile(join(dir, "first.jsonl"), jobs.slice(0, 6));
    writeJobsFile(join(dir, "all.jsonl"), jobs);
    const ledger = join(dir, "ledger.jsonl");

    await synthesizeAndClassify(join(dir, "first.jsonl"), ledger, defaultConfig());
    const prefix = readFileSync(ledger, "utf-8");
    const resumed = await synthesizeAndClassify(join(dir, "all.jsonl"), ledger, defaultConfig());

    expect(resumed.records_skipped).toBe(6);
    expect(resumed.records_written).toBe(4);
    const text = readFileSync(ledger, "utf-8");
    expect(text.startsWith(prefix)).toBe(true);
    const keys = readLedgerRows(ledger).map((r) => `${r.condition_id}:${r.sample_index}`);
    expect(new Set(keys).size).toBe(10);
    expect(keys).toHaveLength(10);
  });

  it("drops a torn final line and re-emits that job whole", async () => {
    const dir = tempDir();
    const jobs = makeJobs(4);
    writeJobsFile(join(dir, "jobs.jsonl"), jobs);
    const ledger = join(dir, "ledger.jsonl");
    await synthesizeAndClassify(join(dir, "jobs.jsonl"), ledger, defaultConfig());
    const clean = readFileSync(ledger, "utf-8");

    // Simulate a write interrupted mid-line: keep two full records, then
    // half of the third with no trailing newline.
    const lines = clean.trimEnd().split("\n");
    writeFileSync(ledger, lines.slice(0, 2).join("\n") + "\n" + lines[2]!.slice(0, 17), "utf-8");

    const summary = await synthesizeAndClassify(join(dir, "jobs.jsonl"), ledger, defaultConfig());
    expect(summary.repaired).toBe(true);
    expect(summary.records_skipped).toBe(2);
    expect(summary.records_written).toBe(2);
    expect(readFileSync(ledger, "utf-8")).toBe(clean);
  });

  it("refuses a ledger corrupted before the final line", async () => {
    const dir = tempDir();
    writeJobsFile(join(dir, "jobs.jsonl"), makeJobs(2));
    const ledger = join(dir, "ledger.jsonl");
    writeFileSync(ledger, "{broken\n" + '{"version":1}\n', "utf-8");
    await expect(
      synthesizeAndClassify(join(dir, "jobs.jsonl"), ledger, defaultConfig()),
    ).rejects.toThrowError(SchemaViolation);
  });

  it("skips duplicate keys inside the jobs file itself", async () => {
    const dir = tempDir();
    const [job] = makeJobs(1);
    writeJobsFile(join(dir, "jobs.jsonl"), [job!, job!]);
    const ledger = join(dir, "ledger.jsonl");
    const summary = await synthesizeAndClassify(join(dir, "jobs.jsonl"), ledger, defaultConfig());
    expect(summary.records_written).toBe(1);
    expect(summary.records_skipped).toBe(1);
    expect(readLedgerRows(ledger)).toHaveLength(1);
  });

  it("passes the classifier's probability through untouched", async () => {
    withClassifier("always-083", async () => 0.83);
    const dir = tempDir();
    writeJobsFile(join(dir, "jobs.jsonl"), makeJobs(3));
    const ledger = join(dir, "ledger.jsonl");
    const config = { ...defaultConfig(), classifier: "always-083" };
    await synthesizeAndClassify(join(dir, "jobs.jsonl"), ledger, config);
    expect(readLedgerRows(ledger).map((r) => r.female_prob)).toEqual([0.83, 0.83, 0.83]);
  });

  it("records per-job failures and keeps going", async () => {
    registerSynthesizer("flaky-itts", () => {
      const inner = new MockSynthesizer();
      return {
        id: "flaky-itts",
        load: async () => {},
        synthesize: (instruction, transcript, opts) => {
          if (opts.sampleIndex === 1) throw new Error("vocoder exploded");
          return inner.synthesize(instruction, transcript, opts);
        },
      };
    });
    registered.push("flaky-itts");

    const dir = tempDir();
    const jobs = makeJobs(9); // three conditions x sample indices 0..2
    writeJobsFile(join(dir, "jobs.jsonl"), jobs);
    const ledger = join(dir, "ledger.jsonl");
    const config = { ...defaultConfig(), model: "flaky-itts" };
    const summary = await synthesizeAndClassify(join(dir, "jobs.jsonl"), ledger, config);

    expect(summary.records_written).toBe(6);
    expect(summary.failures).toHaveLength(3);
    for (const failure of summary.failures) {
      expect(failure.sample_index).toBe(1);
      expect(failure.error).toMatch(/vocoder exploded/);
    }
    expect(readLedgerRows(ledger)).toHaveLength(6);
  });

  it("treats an out-of-range classifier output as a job failure", async () => {
    withClassifier("broken-prob", async () => 1.5);
    const dir = tempDir();
    writeJobsFile(join(dir, "jobs.jsonl"), makeJobs(2));
    const ledger = join(dir, "ledger.jsonl");
    const config = { ...defaultConfig(), classifier: "broken-prob" };
    const summary = await synthesizeAndClassify(join(dir, "jobs.jsonl"), ledger, config);
    expect(summary.records_written).toBe(0);
    expect(summary.failures).toHaveLength(2);
    expect(summary.failures[0]!.error).toMatch(/expected a probability/);
  });

  it("fails on an unknown model id before creating the ledger", async () => {
    const dir = tempDir();
    writeJobsFile(join(dir, "jobs.jsonl"), makeJobs(2));
    const ledger = join(dir, "ledger.jsonl");
    const config = { ...defaultConfig(), model: "gpu-monster-9000" };
    await expect(
      synthesizeAndClassify(join(dir, "jobs.jsonl"), ledger, config),
    ).rejects.toThrowError(ModelLoadFailure);
    expect(existsSync(ledger)).toBe(false);
  });

  it("averages repeated decodes; at temperature zero they collapse", async () => {
    const dir = tempDir();
    writeJobsFile(join(dir, "jobs.jsonl"), makeJobs(5));
    const single = join(dir, "single.jsonl");
    const tripled = join(dir, "tripled.jsonl");
    await synthesizeAndClassify(join(dir, "jobs.jsonl"), single, defaultConfig());
    await synthesizeAndClassify(join(dir, "jobs.jsonl"), tripled, {
      ...defaultConfig(),
      samples_per_job: 3,
    });
    // Averaging k identical decodes reproduces the single-decode value up
    // to one rounding step of (p * k) / k.
    const a = readLedgerRows(single);
    const b = readLedgerRows(tripled);
    expect(b.map((r) => r.condition_id)).toEqual(a.map((r) => r.condition_id));
    for (let i = 0; i < a.length; i++) {
      expect(b[i]!.female_prob).toBeCloseTo(a[i]!.female_prob, 12);
    }
  });
});
