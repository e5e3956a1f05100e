/**
 * Cross-package conformance: files this adapter produces must pass the
 * core toolkit's own schema validation with zero errors, and a rerun must
 * not introduce duplicates. Runs the real core CLI; skipped when the core
 * package is not installed in the environment.
 */

import { spawnSync } from "node:child_process";
import { readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { runCli } from "../src/cli.js";
import { defaultConfig } from "../src/config.js";
import { synthesizeAndClassify } from "../src/synthesize.js";
import { tempDir } from "./helpers.js";

const REPO_ROOT = fileURLToPath(new URL("../..", import.meta.url));

function core(args: string[], cwd: string) {
  return spawnSync("python3", ["-m", "cueaudit", ...args], {
    cwd,
    encoding: "utf-8",
    timeout: 50_000,
  });
}

const coreAvailable = core(["--help"], REPO_ROOT).status === 0;

describe.skipIf(!coreAvailable)("core-toolkit conformance (smoke manifest)", () => {
  const dir = tempDir();
  const jobsPath = join(dir, "smoke_jobs.jsonl");
  const ledgerPath = join(dir, "smoke_ledger.jsonl");
  const embPath = join(dir, "smoke_embeddings.jsonl");

  it("enumerates a 10-job smoke manifest with the core CLI", () => {
    writeFileSync(
      join(dir, "manifest.yaml"),
      "format: cueaudit-manifest\nversion: 1\nconfig:\n  lexicon: default\noutput_dir: .\n",
      "utf-8",
    );
    const run = core(["enumerate", "--manifest", join(dir, "manifest.yaml")], dir);
    expect(run.status, run.stderr).toBe(0);

    const lines = readFileSync(join(dir, "jobs_stage1.jsonl"), "utf-8")
      .trimEnd()
      .split("\n")
      .slice(0, 10);
    expect(lines).toHaveLength(10);
    writeFileSync(jobsPath, lines.join("\n") + "\n", "utf-8");
  });

  it("produces a ledger that passes core validation with zero errors", async () => {
    expect(await runCli(["synthesize", "--jobs", jobsPath, "--out", ledgerPath])).toBe(0);

    const check = core(["validate", "--ledger", ledgerPath], dir);
    expect(check.status, check.stderr).toBe(0);
    const result = JSON.parse(check.stdout);
    expect(result.ok).toBe(true);
    const report = Object.values(result.checked)[0] as Record<string, unknown>;
    expect(report.kind).toBe("ledger");
    expect(report.records).toBe(10);
  });

  it("produces an embedding file that passes core validation with zero errors", async () => {
    const spec = {
      encoder: "mock-encoder",
      templates: [
        { id: "tpl_01", text: "Please speak as {surface} would, at a steady pace." },
        { id: "tpl_02", text: "Read the next line in the voice of {surface}." },
      ],
      descriptors: [
        { key: "car_nurse", surface: "a nurse" },
        { key: "car_mechanic", surface: "a mechanic" },
        { key: "per_warm", surface: "a warm person" },
        { key: "per_blunt", surface: "a blunt person" },
        { key: "sta_high", surface: "a person of high social status" },
        { key: "sta_low", surface: "a person of low social status" },
      ],
      anchors: { female: ["she", "her"], male: ["he", "him"] },
    };
    writeFileSync(join(dir, "spec.json"), JSON.stringify(spec), "utf-8");

    expect(
      await runCli(["extract-embeddings", "--spec", join(dir, "spec.json"), "--out", embPath]),
    ).toBe(0);

    const check = core(["validate", "--embeddings", embPath], dir);
    expect(check.status, check.stderr).toBe(0);
    const result = JSON.parse(check.stdout);
    expect(result.ok).toBe(true);
    const report = Object.values(result.checked)[0] as Record<string, unknown>;
    expect(report.kind).toBe("embeddings");
    expect(report.records).toBe(6 * 2 + 4);
    expect(report.encoder).toBe("mock-encoder");
  });

  it("rerun produces no duplicates and still validates cleanly", async () => {
    const before = readFileSync(ledgerPath, "utf-8");
    const summary = await synthesizeAndClassify(jobsPath, ledgerPath, defaultConfig());

    expect(summary.records_written).toBe(0);
    expect(summary.records_skipped).toBe(10);
    expect(readFileSync(ledgerPath, "utf-8")).toBe(before);

    const check = core(["validate", "--ledger", ledgerPath], dir);
    expect(check.status, check.stderr).toBe(0);
  });
});
