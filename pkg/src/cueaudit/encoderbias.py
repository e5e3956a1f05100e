"""Semantic gender bias of text encoders, measured on supplied embeddings.

The toolkit never runs an encoder itself. An adapter extracts contextual
embeddings for descriptor surfaces and for a fixed list of gendered anchor
words, writes them to the embedding file format below, and this module
scores them: per-descriptor relative similarity Δ (mean cosine to the
female anchors minus mean cosine to the male anchors), standardized scores
across an encoder's descriptors, and one-sample Cohen's d per subgroup.

Embedding file layout (JSON lines):
  line 1   header: {"format": "cueaudit-embeddings", "version": 1,
                    "encoder": <name>, "dimension": <d>, "count": <n>}
  lines 2+ one record per line: {"key": <descriptor id or anchor word>,
                    "context_tag": <template id or null>, "vector": [...]}

Keys may repeat: repeated rows are alternative contextualizations of the
same word and are averaged at the cosine level, not the vector level.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    DegenerateVariance,
    DimensionMismatch,
    EmptyAnchorSet,
    EmptyEmbeddingFile,
    SchemaViolation,
    ZeroVector,
)

EMBEDDING_FORMAT = "cueaudit-embeddings"
EMBEDDING_VERSION = 1

_NORM_FLOOR = 1e-12


@dataclass(frozen=True)
class EmbeddingRecord:
    """One contextualized vector for a descriptor surface or anchor word."""

    key: str
    vector: tuple[float, ...]
    context_tag: Optional[str] = None

    def __post_init__(self):
        if not self.vector:
            raise ZeroVector(f"empty vector for key {self.key!r}")
        norm = math.sqrt(sum(x * x for x in self.vector))
        if norm <= _NORM_FLOOR:
            raise ZeroVector(f"vector for key {self.key!r} has near-zero norm")


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    """Cosine similarity, clipped to [-1, 1] against rounding spill."""
    a = np.asarray(u, dtype=float)
    b = np.asarray(v, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatch(f"vector shapes differ: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na <= _NORM_FLOOR or nb <= _NORM_FLOOR:
        raise ZeroVector("cosine undefined for near-zero vectors")
    return float(np.clip(float(a @ b) / (na * nb), -1.0, 1.0))


def _mean_cosine(
    traits: Sequence[EmbeddingRecord], anchors: Sequence[EmbeddingRecord]
) -> float:
    return float(
        np.mean([cosine(t.vector, a.vector) for t in traits for a in anchors])
    )


def delta(
    trait: Sequence[EmbeddingRecord],
    female_anchors: Sequence[EmbeddingRecord],
    male_anchors: Sequence[EmbeddingRecord],
) -> float:
    """Relative similarity of a trait to female versus male anchor words.

    Positive values mean the encoder places the trait closer to the female
    anchors. All contextualizations of the trait and every anchor record
    participate symmetrically.
    """
    if not trait:
        raise ValueError("trait embedding set is empty")
    if not female_anchors or not male_anchors:
        raise EmptyAnchorSet("both anchor sets must be nonempty")
    return _mean_cosine(trait, female_anchors) - _mean_cosine(trait, male_anchors)


@dataclass(frozen=True)
class AxisBiasSummary:
    """Distribution of word-level Δ within one axis or subgroup."""

    subgroup: str
    mean_delta: float
    std_delta: float
    cohens_d: float
    n_words: int


def axis_effect_size(subgroup: str, deltas: Sequence[float]) -> AxisBiasSummary:
    """One-sample Cohen's d of a subgroup's Δ values against zero.

    Uses the sample standard deviation (n-1 denominator), so at least two
    words and nonzero spread are required; d > 0 marks a female-leaning
    prior for the subgroup as a whole.
    """
    if len(deltas) < 2:
        raise DegenerateVariance(
            f"subgroup {subgroup!r} has {len(deltas)} delta value(s), need >= 2"
        )
    arr = np.asarray(deltas, dtype=float)
    sd = float(arr.std(ddof=1))
    if sd == 0.0:
        raise DegenerateVariance(f"all delta values equal in subgroup {subgroup!r}")
    mean = float(arr.mean())
    return AxisBiasSummary(
        subgroup=subgroup,
        mean_delta=mean,
        std_delta=sd,
        cohens_d=mean / sd,
        n_words=len(deltas),
    )


def standardized_scores(deltas: Mapping[str, float]) -> dict[str, float]:
    """Z-score each word's Δ against all of the encoder's descriptors."""
    if len(deltas) < 2:
        raise DegenerateVariance("standardization needs >= 2 delta values")
    arr = np.asarray(list(deltas.values()), dtype=float)
    sd = float(arr.std(ddof=1))
    if sd == 0.0:
        raise DegenerateVariance("all delta values are equal; scores undefined")
    mean = float(arr.mean())
    return {key: (value - mean) / sd for key, value in deltas.items()}


@dataclass(frozen=True)
class EmbeddingSet:
    """All records from one embedding file, with the header metadata."""

    encoder: str
    dimension: int
    records: tuple[EmbeddingRecord, ...]

    def for_key(self, key: str) -> tuple[EmbeddingRecord, ...]:
        return tuple(r for r in self.records if r.key == key)

    @property
    def keys(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for r in self.records:
            seen.setdefault(r.key, None)
        return tuple(seen)


def write_embeddings(path, encoder: str, records: Iterable[EmbeddingRecord]) -> None:
    rows = list(records)
    if not rows:
        raise EmptyEmbeddingFile("refusing to write an embedding file with no records")
    dimension = len(rows[0].vector)
    with open(path, "w", encoding="utf-8") as fh:
        header = {
            "format": EMBEDDING_FORMAT,
            "version": EMBEDDING_VERSION,
            "encoder": encoder,
            "dimension": dimension,
            "count": len(rows),
        }
        fh.write(json.dumps(header, separators=(",", ":")) + "\n")
        for r in rows:
            if len(r.vector) != dimension:
                raise DimensionMismatch(
                    f"record {r.key!r} has dimension {len(r.vector)}, "
                    f"file dimension is {dimension}"
                )
            row = {
                "key": r.key,
                "context_tag": r.context_tag,
                "vector": list(r.vector),
            }
            fh.write(json.dumps(row, separators=(",", ":")) + "\n")


def read_embeddings(path) -> EmbeddingSet:
    """Parse and validate one embedding file.

    Raises SchemaViolation on malformed headers or rows, DimensionMismatch
    when a row disagrees with the header dimension, ZeroVector on
    degenerate rows, and EmptyEmbeddingFile when no records follow the
    header.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line for line in (raw.strip() for raw in fh) if line]
    if not lines:
        raise EmptyEmbeddingFile(f"{path}: file is empty")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"{path}:1: header is not valid JSON: {exc}") from exc
    if not isinstance(header, dict) or header.get("format") != EMBEDDING_FORMAT:
        raise SchemaViolation(f"{path}:1: missing or wrong format tag")
    if header.get("version") != EMBEDDING_VERSION:
        raise SchemaViolation(
            f"{path}:1: unsupported version {header.get('version')!r}"
        )
    for field in ("encoder", "dimension", "count"):
        if field not in header:
            raise SchemaViolation(f"{path}:1: header lacks {field!r}")
    dimension = header["dimension"]
    if not isinstance(dimension, int) or dimension < 1:
        raise SchemaViolation(f"{path}:1: bad dimension {dimension!r}")

    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"{path}:{lineno}: not valid JSON: {exc}") from exc
        if not isinstance(row, dict):
            raise SchemaViolation(f"{path}:{lineno}: row is not an object")
        missing = {"key", "vector"} - set(row)
        if missing:
            raise SchemaViolation(f"{path}:{lineno}: missing fields {sorted(missing)}")
        vector = row["vector"]
        if not isinstance(vector, list) or not all(
            isinstance(x, (int, float)) for x in vector
        ):
            raise SchemaViolation(f"{path}:{lineno}: vector must be a number list")
        if len(vector) != dimension:
            raise DimensionMismatch(
                f"{path}:{lineno}: vector has dimension {len(vector)}, "
                f"header says {dimension}"
            )
        records.append(
            EmbeddingRecord(
                key=str(row["key"]),
                vector=tuple(float(x) for x in vector),
                context_tag=row.get("context_tag"),
            )
        )
    if not records:
        raise EmptyEmbeddingFile(f"{path}: header present but no records")
    if header["count"] != len(records):
        raise SchemaViolation(
            f"{path}: header count {header['count']} != {len(records)} records"
        )
    return EmbeddingSet(
        encoder=str(header["encoder"]), dimension=dimension, records=tuple(records)
    )
