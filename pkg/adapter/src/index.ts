export { AdapterConfigSchema, defaultConfig, loadAdapterConfig } from "./config.js";
export type { AdapterConfig } from "./config.js";
export {
  EmbeddingSpecSchema,
  encodeInContext,
  extractEmbeddings,
  loadEmbeddingSpec,
} from "./embeddings.js";
export type { EmbeddingSpec, ExtractResult } from "./embeddings.js";
export {
  AdapterError,
  EncoderLoadFailure,
  ModelLoadFailure,
  SchemaViolation,
  SynthesisFailure,
} from "./errors.js";
export {
  MockClassifier,
  MockEncoder,
  MockSynthesizer,
  registerClassifier,
  registerEncoder,
  registerSynthesizer,
  resolveClassifier,
  resolveEncoder,
  resolveSynthesizer,
  unregisterProvider,
} from "./providers.js";
export type {
  ClassifierProvider,
  EncoderProvider,
  SynthesisProvider,
  SynthesizeOptions,
  Waveform,
} from "./providers.js";
export { summaryPath, synthesizeAndClassify } from "./synthesize.js";
export type { JobFailure, RunSummary } from "./synthesize.js";
export {
  EMBEDDING_FORMAT,
  EMBEDDING_VERSION,
  LEDGER_VERSION,
  embeddingFileText,
  ledgerLine,
  parseJobRow,
  parseLedgerLine,
  readJobs,
} from "./wire.js";
export type { EmbeddingRow, JobRow, LedgerRow } from "./wire.js";
export { runCli } from "./cli.js";
