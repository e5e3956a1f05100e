/**
 * Provider interfaces for the three model roles the adapter bridges:
 * instruction-driven TTS, speech gender classification, and contextual
 * text encoding. Real backends register themselves under an id; config
 * files select by id. A deterministic mock for each role ships built in,
 * so the pipeline is runnable (and its file contracts testable) without
 * model weights.
 */

import { EncoderLoadFailure, ModelLoadFailure } from "./errors.js";

export interface Waveform {
  sampleRate: number;
  samples: Float32Array;
}

export interface SynthesizeOptions {
  /** Decoder sampling temperature; 0 means greedy/deterministic decoding. */
  temperature: number;
  /** Varies the decode for repeated samples of one condition. */
  sampleIndex: number;
  /** Distinguishes repeated decodes of one job when averaging. */
  decodeIndex: number;
}

export interface SynthesisProvider {
  readonly id: string;
  /** Resolve model assets up front; throws ModelLoadFailure. */
  load(): Promise<void>;
  synthesize(instruction: string, transcript: string, opts: SynthesizeOptions): Promise<Waveform>;
}

export interface ClassifierProvider {
  readonly id: string;
  load(): Promise<void>;
  /** Returns the probability the utterance is perceived female, in [0, 1]. */
  classify(wave: Waveform): Promise<number>;
}

export interface EncoderProvider {
  readonly id: string;
  readonly dimension: number;
  load(): Promise<void>;
  /** One contextualized vector per input token. */
  embedTokens(tokens: string[]): Promise<number[][]>;
}

// ── Deterministic hashing for the mocks ────────────────────────────────

function fnv1a(text: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}

/** Avalanche a 32-bit hash into [0, 1). */
function unit(text: string): number {
  let h = fnv1a(text);
  h = Math.imul(h ^ (h >>> 16), 0x45d9f3b);
  h = Math.imul(h ^ (h >>> 16), 0x45d9f3b);
  h ^= h >>> 16;
  return (h >>> 0) / 4294967296;
}

/** Hash to [-1, 1). */
function signedUnit(text: string): number {
  return unit(text) * 2 - 1;
}

function sigmoid(x: number): number {
  return 1 / (1 + Math.exp(-x));
}

// ── Mock backends ──────────────────────────────────────────────────────

const MOCK_SAMPLE_RATE = 16_000;
const MOCK_DURATION_S = 0.25;

/**
 * Stands in for an ITTS system: the instruction text deterministically
 * picks a voice, encoded as the fundamental frequency of a sine tone
 * (higher pitch for more female-leaning instructions). Temperature adds
 * hash-derived jitter per (sample, decode), so greedy decoding at
 * temperature 0 is exactly reproducible.
 */
export class MockSynthesizer implements SynthesisProvider {
  readonly id = "mock-itts";

  async load(): Promise<void> {}

  async synthesize(
    instruction: string,
    _transcript: string,
    opts: SynthesizeOptions,
  ): Promise<Waveform> {
    let voice = signedUnit(`voice|${instruction}`) * 4;
    if (opts.temperature > 0) {
      voice +=
        opts.temperature *
        signedUnit(`jitter|${instruction}|${opts.sampleIndex}|${opts.decodeIndex}`);
    }
    const f0 = 100 + 120 * sigmoid(voice);
    const n = Math.round(MOCK_SAMPLE_RATE * MOCK_DURATION_S);
    const samples = new Float32Array(n);
    for (let i = 0; i < n; i++) {
      samples[i] = Math.sin((2 * Math.PI * f0 * i) / MOCK_SAMPLE_RATE);
    }
    return { sampleRate: MOCK_SAMPLE_RATE, samples };
  }
}

/**
 * Stands in for a speech gender classifier: estimates the fundamental
 * frequency by zero-crossing count and maps it through a logistic curve
 * centered between typical male and female pitch.
 */
export class MockClassifier implements ClassifierProvider {
  readonly id = "mock-gender-classifier";

  async load(): Promise<void> {}

  async classify(wave: Waveform): Promise<number> {
    let crossings = 0;
    for (let i = 1; i < wave.samples.length; i++) {
      const a = wave.samples[i - 1]!;
      const b = wave.samples[i]!;
      if ((a < 0 && b >= 0) || (a >= 0 && b < 0)) crossings += 1;
    }
    const duration = wave.samples.length / wave.sampleRate;
    const f0 = crossings / (2 * duration);
    return sigmoid((f0 - 160) / 12);
  }
}

/**
 * Stands in for a contextual text encoder: each token's vector is a hash
 * of the token, its dimension index, and its left neighbor, so identical
 * contexts embed identically while differing contexts do not.
 */
export class MockEncoder implements EncoderProvider {
  readonly id: string = "mock-encoder";
  readonly dimension: number;

  constructor(dimension = 16) {
    this.dimension = dimension;
  }

  async load(): Promise<void> {}

  async embedTokens(tokens: string[]): Promise<number[][]> {
    return tokens.map((token, position) => {
      const prev = position > 0 ? tokens[position - 1]! : "<s>";
      const vector = new Array<number>(this.dimension);
      for (let j = 0; j < this.dimension; j++) {
        vector[j] =
          signedUnit(`${this.id}|tok|${token}|${j}`) +
          0.25 * signedUnit(`${this.id}|ctx|${prev}>${token}|${j}`);
      }
      return vector;
    });
  }
}

// ── Registries ─────────────────────────────────────────────────────────

const synthesizers = new Map<string, () => SynthesisProvider>();
const classifiers = new Map<string, () => ClassifierProvider>();
const encoders = new Map<string, () => EncoderProvider>();

export function registerSynthesizer(id: string, factory: () => SynthesisProvider): void {
  synthesizers.set(id, factory);
}

export function registerClassifier(id: string, factory: () => ClassifierProvider): void {
  classifiers.set(id, factory);
}

export function registerEncoder(id: string, factory: () => EncoderProvider): void {
  encoders.set(id, factory);
}

export function unregisterProvider(id: string): void {
  synthesizers.delete(id);
  classifiers.delete(id);
  encoders.delete(id);
}

function known(ids: Map<string, unknown>): string {
  return [...ids.keys()].sort().join(", ");
}

export function resolveSynthesizer(id: string): SynthesisProvider {
  const factory = synthesizers.get(id);
  if (!factory) {
    throw new ModelLoadFailure(`unknown model id ${JSON.stringify(id)}; known: ${known(synthesizers)}`);
  }
  return factory();
}

export function resolveClassifier(id: string): ClassifierProvider {
  const factory = classifiers.get(id);
  if (!factory) {
    throw new ModelLoadFailure(
      `unknown classifier id ${JSON.stringify(id)}; known: ${known(classifiers)}`,
    );
  }
  return factory();
}

export function resolveEncoder(id: string): EncoderProvider {
  const factory = encoders.get(id);
  if (!factory) {
    throw new EncoderLoadFailure(`unknown encoder id ${JSON.stringify(id)}; known: ${known(encoders)}`);
  }
  return factory();
}

registerSynthesizer("mock-itts", () => new MockSynthesizer());
registerClassifier("mock-gender-classifier", () => new MockClassifier());
registerEncoder("mock-encoder", () => new MockEncoder());
