"""Regenerate the committed toy embedding file.

Builds 16-dimensional vectors whose gender direction loosely tracks the
demo oracle's univariate weights: anchor words sit at two opposite poles
and each descriptor is a noisy mixture leaning toward one pole. Output is
deterministic; run from the repo root:

    python3 demo/make_embeddings.py
"""

from pathlib import Path

import numpy as np
import yaml

from cueaudit import EmbeddingRecord, load_config, write_embeddings

HERE = Path(__file__).parent
DIM = 16
RNG = np.random.default_rng(1234)


def unit(v):
    return v / np.linalg.norm(v)


def main() -> None:
    config = load_config()
    weights = yaml.safe_load((HERE / "oracle.yaml").read_text())["weights"]

    female_pole = unit(RNG.normal(size=DIM))
    # An orthogonalized opposite pole, so anchors are cleanly separated.
    raw = RNG.normal(size=DIM)
    male_pole = unit(raw - (raw @ female_pole) * female_pole)

    records = []
    for word in config.anchors.female:
        vec = unit(female_pole + 0.15 * RNG.normal(size=DIM))
        records.append(EmbeddingRecord(word, tuple(vec)))
    for word in config.anchors.male:
        vec = unit(male_pole + 0.15 * RNG.normal(size=DIM))
        records.append(EmbeddingRecord(word, tuple(vec)))
    for d in config.lexicon.all:
        lean = np.tanh(weights.get(d.id, 0.0))
        base = lean * female_pole - lean * 0.8 * male_pole
        vec = unit(base + 0.6 * RNG.normal(size=DIM))
        records.append(EmbeddingRecord(d.id, tuple(vec), context_tag="tpl_01"))

    out = HERE / "embeddings_toy.jsonl"
    write_embeddings(out, "toy-16d", records)
    print(f"wrote {out} ({len(records)} records)")


if __name__ == "__main__":
    main()
