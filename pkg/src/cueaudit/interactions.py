"""Interaction decomposition of composite-condition log-odds.

Under cue independence the log-odds of a composite condition equal the sum
of its constituents' univariate log-odds; the interaction term is the
deviation from that additive baseline. Pairwise terms subtract the two
univariate logits; triple terms additionally subtract all three pairwise
interactions. Significance comes from a permutation test that pools the
hard per-utterance outcomes of every condition entering the term and
redistributes them while preserving each condition's sample count.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import binomtest

from .axes import SemanticConfig, univariate
from .errors import InsufficientSamples
from .ledger import ConditionStats, ContinuityPolicy, Ledger, condition_stats


# --- stage 1 stratification -------------------------------------------------

class Tier(str, Enum):
    FEMALE_LEANING = "female-leaning"
    MIXED = "mixed"
    MALE_LEANING = "male-leaning"


@dataclass(frozen=True)
class TierAssignment:
    descriptor_id: str
    tier: Tier
    p_hat: float
    n: int
    p_value: float


def stratify(
    stats: Mapping[str, ConditionStats],
    alpha: float = 0.05,
    min_n: int = 20,
) -> list[TierAssignment]:
    """Assign each descriptor a gender tier by exact binomial test.

    ``stats`` maps descriptor id to that descriptor's univariate condition
    statistics. A descriptor is female-leaning when its female fraction
    deviates significantly above 0.5 at level ``alpha`` (two-sided exact
    test), male-leaning when below, and mixed otherwise.
    """
    assignments = []
    for descriptor_id in stats:
        s = stats[descriptor_id]
        if s.n < min_n:
            raise InsufficientSamples(
                f"descriptor {descriptor_id!r} has n={s.n} < {min_n}"
            )
        successes = int(round(s.p_hat * s.n))
        p_value = float(binomtest(successes, s.n, 0.5).pvalue)
        if p_value < alpha:
            tier = Tier.FEMALE_LEANING if s.p_hat > 0.5 else Tier.MALE_LEANING
        else:
            tier = Tier.MIXED
        assignments.append(
            TierAssignment(
                descriptor_id=descriptor_id,
                tier=tier,
                p_hat=s.p_hat,
                n=s.n,
                p_value=p_value,
            )
        )
    return assignments


# --- interaction terms ------------------------------------------------------

def pairwise_interaction(l_bi: float, l_u1: float, l_u2: float) -> float:
    """Deviation of a pair condition's logit from the additive baseline."""
    return l_bi - (l_u1 + l_u2)


def triple_interaction(
    l_multi: float,
    l_uni: Sequence[float],
    i_pairs: Sequence[float],
) -> float:
    """Three-way interaction after removing univariate and pairwise effects."""
    if len(l_uni) != 3 or len(i_pairs) != 3:
        raise ValueError("triple interaction needs 3 univariate logits and 3 pair terms")
    return l_multi - sum(l_uni) - sum(i_pairs)


@dataclass(frozen=True)
class InteractionSpec:
    """Condition ids entering one interaction term.

    ``univariate_ids`` follow canonical axis order; for triples,
    ``pairwise_ids`` hold the three embedded pair conditions in (1,2),
    (1,3), (2,3) order. ``descriptor_ids`` are carried for labeling.
    """

    order: str  # "pairwise" | "triple"
    composite_id: str
    univariate_ids: tuple[str, ...]
    pairwise_ids: tuple[str, ...] = ()
    descriptor_ids: tuple[str, ...] = ()

    def __post_init__(self):
        if self.order == "pairwise":
            if len(self.univariate_ids) != 2 or self.pairwise_ids:
                raise ValueError("pairwise spec needs 2 univariate ids and no pair ids")
        elif self.order == "triple":
            if len(self.univariate_ids) != 3 or len(self.pairwise_ids) != 3:
                raise ValueError("triple spec needs 3 univariate and 3 pairwise ids")
        else:
            raise ValueError(f"unknown interaction order {self.order!r}")

    @property
    def all_condition_ids(self) -> tuple[str, ...]:
        return (self.composite_id, *self.univariate_ids, *self.pairwise_ids)


def spec_for_config(config: SemanticConfig) -> InteractionSpec:
    """Build the interaction spec implied by a composite configuration."""
    ds = config.descriptors
    if config.arity == 2:
        return InteractionSpec(
            order="pairwise",
            composite_id=config.condition_id,
            univariate_ids=tuple(univariate(d).condition_id for d in ds),
            descriptor_ids=tuple(d.id for d in ds),
        )
    if config.arity == 3:
        from .axes import compose

        pair_ids = tuple(
            compose(ds[i], ds[j]).condition_id
            for i, j in ((0, 1), (0, 2), (1, 2))
        )
        return InteractionSpec(
            order="triple",
            composite_id=config.condition_id,
            univariate_ids=tuple(univariate(d).condition_id for d in ds),
            pairwise_ids=pair_ids,
            descriptor_ids=tuple(d.id for d in ds),
        )
    raise ValueError("interaction specs need arity 2 or 3")


def observed_interaction(
    ledger: Ledger,
    spec: InteractionSpec,
    policy: ContinuityPolicy = ContinuityPolicy(),
) -> float:
    """Interaction term from per-condition statistics."""
    l_comp = condition_stats(ledger, spec.composite_id, policy).logit
    l_uni = [condition_stats(ledger, c, policy).logit for c in spec.univariate_ids]
    if spec.order == "pairwise":
        return pairwise_interaction(l_comp, l_uni[0], l_uni[1])
    i_pairs = []
    pair_index = ((0, 1), (0, 2), (1, 2))
    for pair_id, (i, j) in zip(spec.pairwise_ids, pair_index):
        l_bi = condition_stats(ledger, pair_id, policy).logit
        i_pairs.append(pairwise_interaction(l_bi, l_uni[i], l_uni[j]))
    return triple_interaction(l_comp, l_uni, i_pairs)


# --- permutation significance ------------------------------------------------

def _coefficients(spec: InteractionSpec) -> np.ndarray:
    # Expanding the nested definition, a triple term is
    # L(multi) + sum L(uni) - sum L(bi); a pair term is L(bi) - sum L(uni).
    if spec.order == "pairwise":
        return np.array([1.0, -1.0, -1.0])
    return np.array([1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0])


def _stat_from_counts(ones: np.ndarray, totals: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    lo = 1.0 / (2.0 * totals)
    p = np.clip(ones / totals, lo, 1.0 - lo)
    logits = np.log(p) - np.log1p(-p)
    return logits @ coeffs


def derive_seed(base_seed: int, *keys: str) -> int:
    """Deterministic per-spec seed: hash of the base seed and string keys."""
    material = "|".join([str(base_seed), *keys]).encode("utf-8")
    return int.from_bytes(hashlib.sha256(material).digest()[:8], "big")


def permutation_test(
    ledger: Ledger,
    spec: InteractionSpec,
    iterations: int = 10_000,
    seed: int = 0,
) -> float:
    """Two-sided permutation p-value for an interaction term.

    All conditions entering the term are pooled at the level of hard
    per-utterance outcomes (probabilities thresholded at 0.5) and the
    outcomes reassigned to conditions uniformly at random, preserving each
    condition's sample count; the term is recomputed from the same clamped
    logits each iteration. Because the statistic depends only on the
    per-condition female counts, the reassignment is drawn directly as a
    multivariate hypergeometric split of the pooled females over the
    condition sizes, which is distribution-identical to shuffling labels.
    Ties count as extreme: p = (#{|I_perm| >= |I_obs|} + 1) / (iterations + 1).
    """
    if iterations < 1000:
        raise ValueError("permutation test needs at least 1,000 iterations")
    conds = spec.all_condition_ids
    coeffs = _coefficients(spec)
    totals = np.array([ledger.n(c) for c in conds], dtype=float)
    ones = np.array(
        [int(ledger.binary_outcomes(c).sum()) for c in conds], dtype=float
    )
    observed = float(_stat_from_counts(ones, totals, coeffs))

    rng = np.random.default_rng(seed)
    draws = rng.multivariate_hypergeometric(
        totals.astype(int), int(ones.sum()), size=iterations
    ).astype(float)
    permuted = _stat_from_counts(draws, totals, coeffs)
    exceed = int(np.count_nonzero(np.abs(permuted) >= abs(observed)))
    return (exceed + 1) / (iterations + 1)


# --- significance buckets -----------------------------------------------------

class Bucket(str, Enum):
    LIGHT = "light"
    MEDIUM = "medium"
    DARK = "dark"


class Synergy(str, Enum):
    FEMALE = "female"  # positive interaction pushes toward female outcomes
    MALE = "male"


#: (p threshold, |interaction| threshold) per bucket, strongest first.
BUCKET_THRESHOLDS = (
    (Bucket.DARK, 0.01, 2.8),
    (Bucket.MEDIUM, 0.05, 1.0),
)


def classify_bucket(i_value: float, p_value: float) -> Bucket:
    """Bucket an interaction by joint significance and magnitude."""
    for bucket, p_max, i_min in BUCKET_THRESHOLDS:
        if p_value < p_max and abs(i_value) > i_min:
            return bucket
    return Bucket.LIGHT


def synergy_sign(i_value: float) -> Synergy:
    return Synergy.FEMALE if i_value >= 0 else Synergy.MALE


def color_class(i_value: float, p_value: float) -> str:
    """Stable CSS-style class name encoding bucket and direction."""
    bucket = classify_bucket(i_value, p_value)
    hue = "orange" if synergy_sign(i_value) is Synergy.FEMALE else "blue"
    return f"{bucket.value}-{hue}"


@dataclass(frozen=True)
class InteractionResult:
    spec: InteractionSpec
    i_value: float
    p_value: float
    bucket: Bucket
    sign: Synergy


def evaluate_interaction(
    ledger: Ledger,
    spec: InteractionSpec,
    iterations: int = 10_000,
    seed: int = 0,
    policy: ContinuityPolicy = ContinuityPolicy(),
) -> InteractionResult:
    """Observed term, permutation p-value, and bucket for one spec.

    The permutation seed is derived from ``seed`` and the composite
    condition id, so distinct specs get independent, reproducible streams
    regardless of evaluation order.
    """
    i_value = observed_interaction(ledger, spec, policy)
    p_value = permutation_test(
        ledger, spec, iterations, derive_seed(seed, spec.order, spec.composite_id)
    )
    return InteractionResult(
        spec=spec,
        i_value=i_value,
        p_value=p_value,
        bucket=classify_bucket(i_value, p_value),
        sign=synergy_sign(i_value),
    )
