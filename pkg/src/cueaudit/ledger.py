"""Per-utterance outcome records and per-condition statistics.

A ledger groups classifier outcomes by condition. The female outcome of a
record is either a hard decision (stored as 0/1) or a classifier
probability; per-condition probability estimates average the stored values,
and the log-odds transform applies a Haldane-style continuity clamp so that
saturated conditions keep finite logits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Literal

import numpy as np

from .errors import DuplicateSample, SchemaViolation, UnknownCondition


@dataclass(frozen=True)
class UtteranceRecord:
    """One synthesized-and-classified utterance.

    ``female_prob`` is a probability in [0, 1]; hard Female/Male decisions
    are stored as 1.0/0.0.
    """

    condition_id: str
    sample_index: int
    template_id: str
    transcript_id: str
    female_prob: float

    def __post_init__(self):
        p = self.female_prob
        if not isinstance(p, (int, float)) or isinstance(p, bool) or not math.isfinite(p):
            raise SchemaViolation(
                f"female_prob must be a finite number, got {p!r} "
                f"({self.condition_id}/{self.sample_index})"
            )
        if not 0.0 <= p <= 1.0:
            raise SchemaViolation(
                f"female_prob {p} out of [0, 1] "
                f"({self.condition_id}/{self.sample_index})"
            )


@dataclass(frozen=True)
class ConditionStats:
    """Sample count, empirical female probability, and corrected log-odds."""

    condition_id: str
    n: int
    p_hat: float
    logit: float


@dataclass(frozen=True)
class ContinuityPolicy:
    """How per-record outcomes enter the probability estimate.

    ``outcome="mean"`` averages the stored values as they are, which keeps
    probability-valued records (e.g. from a deterministic oracle) exact.
    ``outcome="threshold"`` first binarizes every record at 0.5, matching a
    classifier that must commit to a hard gender decision. Both modes clamp
    only the logit, never the reported probability.
    """

    outcome: Literal["mean", "threshold"] = "mean"

    def __post_init__(self):
        if self.outcome not in ("mean", "threshold"):
            raise ValueError(f"unknown outcome mode {self.outcome!r}")

    def outcomes(self, probs: np.ndarray) -> np.ndarray:
        if self.outcome == "threshold":
            return (probs >= 0.5).astype(float)
        return probs


class Ledger:
    """Immutable collection of utterance records grouped by condition."""

    def __init__(self, by_condition: Dict[str, List[UtteranceRecord]]):
        self._by_condition = {
            cid: tuple(sorted(records, key=lambda r: r.sample_index))
            for cid, records in by_condition.items()
        }

    @property
    def condition_ids(self) -> tuple[str, ...]:
        return tuple(self._by_condition)

    def __contains__(self, condition_id: str) -> bool:
        return condition_id in self._by_condition

    def __len__(self) -> int:
        return sum(len(v) for v in self._by_condition.values())

    def records(self, condition_id: str) -> tuple[UtteranceRecord, ...]:
        try:
            return self._by_condition[condition_id]
        except KeyError:
            raise UnknownCondition(f"condition {condition_id!r} not in ledger") from None

    def n(self, condition_id: str) -> int:
        return len(self.records(condition_id))

    def probs(self, condition_id: str) -> np.ndarray:
        """Stored female values for a condition, in sample order."""
        return np.array([r.female_prob for r in self.records(condition_id)], dtype=float)

    def binary_outcomes(self, condition_id: str) -> np.ndarray:
        """Hard 0/1 outcomes (values thresholded at 0.5)."""
        return (self.probs(condition_id) >= 0.5).astype(float)


def ingest(records: Iterable[UtteranceRecord]) -> Ledger:
    """Group records by condition, rejecting duplicate sample indices."""
    by_condition: Dict[str, List[UtteranceRecord]] = {}
    seen: set[tuple[str, int]] = set()
    for record in records:
        key = (record.condition_id, record.sample_index)
        if key in seen:
            raise DuplicateSample(
                f"duplicate sample {record.sample_index} for condition "
                f"{record.condition_id!r}"
            )
        seen.add(key)
        by_condition.setdefault(record.condition_id, []).append(record)
    return Ledger(by_condition)


def corrected_logit(p_hat: float, n: int) -> float:
    """Log-odds of ``p_hat`` with the sample-size continuity clamp.

    The probability is clamped to [1/(2n), 1 - 1/(2n)] before the log, so
    saturated conditions map to +/- ln(2n - 1) instead of +/- infinity. The
    transform is odd around 0.5: ``corrected_logit(p, n) ==
    -corrected_logit(1 - p, n)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    lo = 1.0 / (2.0 * n)
    if p_hat <= lo:
        return -math.log(2.0 * n - 1.0)
    if p_hat >= 1.0 - lo:
        return math.log(2.0 * n - 1.0)
    if p_hat == 0.5:
        return 0.0
    return math.log(p_hat) - math.log1p(-p_hat)


def condition_stats(
    ledger: Ledger,
    condition_id: str,
    policy: ContinuityPolicy = ContinuityPolicy(),
) -> ConditionStats:
    """Per-condition sample count, raw probability, and clamped logit."""
    outcomes = policy.outcomes(ledger.probs(condition_id))
    n = outcomes.size
    p_hat = float(outcomes.mean())
    return ConditionStats(
        condition_id=condition_id,
        n=n,
        p_hat=p_hat,
        logit=corrected_logit(p_hat, n),
    )


def stats_by_condition(
    ledger: Ledger,
    policy: ContinuityPolicy = ContinuityPolicy(),
) -> Dict[str, ConditionStats]:
    return {cid: condition_stats(ledger, cid, policy) for cid in ledger.condition_ids}
