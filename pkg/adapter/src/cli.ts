#!/usr/bin/env node
/**
 * Command-line entry: `cueaudit-adapter synthesize` turns a job manifest
 * into a ledger; `cueaudit-adapter extract-embeddings` turns a descriptor
 * spec into an embedding file. Success prints the run summary as JSON on
 * stdout; adapter errors print a one-line JSON envelope on stderr and
 * exit 1, usage errors exit 2.
 */

import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { loadAdapterConfig } from "./config.js";
import { loadEmbeddingSpec, extractEmbeddings } from "./embeddings.js";
import { AdapterError } from "./errors.js";
import { synthesizeAndClassify } from "./synthesize.js";

const USAGE = `usage: cueaudit-adapter <command> [options]

commands:
  synthesize          --jobs <jobs.jsonl> --out <ledger.jsonl> [--config <adapter.json>]
  extract-embeddings  --spec <spec.json> --out <embeddings.jsonl>
`;

function usageError(message: string): number {
  process.stderr.write(message + "\n" + USAGE);
  return 2;
}

async function cmdSynthesize(argv: string[]): Promise<number> {
  const { values } = parseArgs({
    args: argv,
    options: {
      jobs: { type: "string" },
      out: { type: "string" },
      config: { type: "string" },
    },
  });
  if (!values.jobs || !values.out) {
    return usageError("synthesize requires --jobs and --out");
  }
  const config = loadAdapterConfig(values.config);
  const summary = await synthesizeAndClassify(values.jobs, values.out, config);
  process.stdout.write(JSON.stringify(summary) + "\n");
  return 0;
}

async function cmdExtractEmbeddings(argv: string[]): Promise<number> {
  const { values } = parseArgs({
    args: argv,
    options: {
      spec: { type: "string" },
      out: { type: "string" },
    },
  });
  if (!values.spec || !values.out) {
    return usageError("extract-embeddings requires --spec and --out");
  }
  const result = await extractEmbeddings(loadEmbeddingSpec(values.spec), values.out);
  process.stdout.write(JSON.stringify(result) + "\n");
  return 0;
}

export async function runCli(argv: string[]): Promise<number> {
  const [command, ...rest] = argv;
  try {
    switch (command) {
      case "synthesize":
        return await cmdSynthesize(rest);
      case "extract-embeddings":
        return await cmdExtractEmbeddings(rest);
      case undefined:
        return usageError("missing command");
      default:
        return usageError(`unknown command ${JSON.stringify(command)}`);
    }
  } catch (exc) {
    if (exc instanceof AdapterError) {
      process.stderr.write(JSON.stringify({ error: exc.name, message: exc.message }) + "\n");
      return 1;
    }
    if (exc instanceof Error && "code" in exc && typeof exc.code === "string") {
      if (exc.code.startsWith("ERR_PARSE_ARGS")) {
        return usageError(exc.message);
      }
      // Filesystem problems (missing jobs file, unwritable output directory)
      // get the same envelope treatment as schema errors.
      process.stderr.write(JSON.stringify({ error: exc.code, message: exc.message }) + "\n");
      return 1;
    }
    throw exc;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;

if (invokedDirectly) {
  runCli(process.argv.slice(2)).then(
    (code) => process.exit(code),
    (exc) => {
      process.stderr.write(String(exc instanceof Error ? exc.stack ?? exc.message : exc) + "\n");
      process.exit(1);
    },
  );
}
