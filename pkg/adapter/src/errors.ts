/** Error taxonomy shared by the adapter's runner, extractor, and CLI. */

export class AdapterError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

/** A wire-format or config file violates its schema. */
export class SchemaViolation extends AdapterError {}

/** A model or classifier id failed to resolve or load. */
export class ModelLoadFailure extends AdapterError {}

/** A single job failed during synthesis or classification. */
export class SynthesisFailure extends AdapterError {}

/** A text-encoder id failed to resolve or load. */
export class EncoderLoadFailure extends AdapterError {}
