"""Synthetic classification oracle with known ground truth.

The oracle assigns every condition a true log-odds value that is additive
in per-descriptor cue weights, optionally perturbed by injected interaction
terms for specific descriptor combinations. It exists to make the analysis
pipeline verifiable: with no injected terms the interaction decomposition
must recover exactly zero, and with injected terms it must recover exactly
the injected values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .axes import SemanticConfig
from .ledger import UtteranceRecord
from .promptspace import InstructionJob


def sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _freeze_interactions(
    interactions: Mapping,
) -> tuple[tuple[frozenset[str], float], ...]:
    frozen = []
    for key, value in interactions.items():
        ids = frozenset(key) if not isinstance(key, frozenset) else key
        if len(ids) < 2:
            raise ValueError(f"interaction term needs >= 2 descriptors, got {set(ids)}")
        frozen.append((ids, float(value)))
    return tuple(sorted(frozen, key=lambda kv: sorted(kv[0])))


@dataclass(frozen=True)
class OracleSpec:
    """Ground-truth bias model over descriptor ids.

    ``cue_weights`` holds additive log-odds contributions per descriptor id
    (missing descriptors contribute 0). ``injected_interactions`` maps
    descriptor-id sets to extra log-odds added whenever all of the set's
    descriptors are present. In ``deterministic`` mode each record carries
    the exact female probability; in ``bernoulli`` mode each record is a
    hard label drawn from the seeded generator.
    """

    base_logit: float = 0.0
    cue_weights: Mapping[str, float] = field(default_factory=dict)
    injected_interactions: Mapping = field(default_factory=dict)
    noise_mode: str = "deterministic"
    rng_seed: int = 0

    def __post_init__(self):
        if self.noise_mode not in ("deterministic", "bernoulli"):
            raise ValueError(f"unknown noise mode {self.noise_mode!r}")
        object.__setattr__(
            self, "_interactions", _freeze_interactions(self.injected_interactions)
        )

    def true_log_odds(self, config: SemanticConfig) -> float:
        """Closed-form log-odds for a semantic configuration."""
        present = {d.id for d in config.descriptors}
        total = self.base_logit
        total += sum(self.cue_weights.get(d, 0.0) for d in sorted(present))
        for ids, value in self._interactions:
            if ids <= present:
                total += value
        return total

    def true_probability(self, config: SemanticConfig) -> float:
        return sigmoid(self.true_log_odds(config))


def simulate(spec: OracleSpec, jobs: Sequence[InstructionJob]) -> list[UtteranceRecord]:
    """Emit one utterance record per job.

    Deterministic for a fixed (spec, jobs) pair: the bernoulli generator is
    seeded from ``spec.rng_seed`` and consumed in job order.
    """
    rng = np.random.default_rng(spec.rng_seed)
    records = []
    for job in jobs:
        p = spec.true_probability(job.config)
        if spec.noise_mode == "bernoulli":
            value = 1.0 if rng.random() < p else 0.0
        else:
            value = p
        records.append(
            UtteranceRecord(
                condition_id=job.condition_id,
                sample_index=job.sample_index,
                template_id=job.template_id,
                transcript_id=job.transcript_id,
                female_prob=value,
            )
        )
    return records
