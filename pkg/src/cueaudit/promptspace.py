"""Prompt-space realization and enumeration.

Turns abstract semantic configurations into natural-language style
instructions and enumerates the two evaluation stages: one condition per
isolated descriptor (stage 1), then the composite pairs and triples built
from the most polarizing stage-1 descriptors (stage 2). Every condition is
crossed with the full template x transcript grid, so a run over the default
configuration yields 100 utterance jobs per condition.

Enumeration is pure: identical inputs produce identical job lists in
identical order.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .axes import AXES, Axis, Descriptor, SemanticConfig, compose, univariate
from .errors import (
    InsufficientDescriptors,
    MalformedTemplate,
    MissingStage1,
)

_PLACEHOLDER_RE = re.compile(r"\{(\w+)\}")


@dataclass(frozen=True)
class Transcript:
    """A gender-neutral content sentence, fixed across all conditions."""

    id: str
    text: str


@dataclass(frozen=True)
class PromptTemplate:
    """A realization template with one named placeholder per axis slot.

    ``pattern`` must mention ``{status}``, ``{career}`` and ``{persona}``
    exactly once each. ``fragments`` maps each axis to the phrase inserted
    when that slot is populated; the descriptor surface replaces
    ``{surface}`` inside the fragment. Empty slots are elided and the
    surrounding whitespace collapsed, so any subset of slots renders to
    clean text.
    """

    id: str
    pattern: str
    fragments: Mapping[Axis, str]

    def __post_init__(self):
        names = _PLACEHOLDER_RE.findall(self.pattern)
        expected = [a.value for a in AXES]
        for name in expected:
            if names.count(name) != 1:
                raise MalformedTemplate(
                    f"template {self.id!r}: placeholder {{{name}}} must appear "
                    f"exactly once (found {names.count(name)})"
                )
        for name in names:
            if name not in expected:
                raise MalformedTemplate(
                    f"template {self.id!r}: unknown placeholder {{{name}}}"
                )
        for axis in AXES:
            frag = self.fragments.get(axis)
            if frag is None:
                raise MalformedTemplate(
                    f"template {self.id!r}: no fragment for slot {axis.value!r}"
                )
            if frag.count("{surface}") != 1:
                raise MalformedTemplate(
                    f"template {self.id!r}: fragment for {axis.value!r} must "
                    "contain {surface} exactly once"
                )

    def render(self, config: SemanticConfig) -> str:
        parts = {}
        for axis in AXES:
            d = config.slot(axis)
            parts[axis.value] = (
                self.fragments[axis].replace("{surface}", d.surface) if d else ""
            )
        text = self.pattern.format(**parts)
        text = re.sub(r"\s+", " ", text).strip()
        return re.sub(r"\s+([.,;:!?])", r"\1", text)


@dataclass(frozen=True)
class InstructionJob:
    """One fully realized synthesis job.

    ``condition_id`` depends only on the semantic configuration;
    ``sample_index`` numbers the template x transcript grid within the
    condition and is what downstream ledgers key their samples on.
    """

    condition_id: str
    instruction: str
    transcript_id: str
    template_id: str
    transcript: str
    sample_index: int
    config: SemanticConfig


@dataclass(frozen=True)
class Lexicon:
    """Descriptor lists per axis, with id-based lookup."""

    status: tuple[Descriptor, ...]
    career: tuple[Descriptor, ...]
    persona: tuple[Descriptor, ...]

    def axis(self, axis: Axis) -> tuple[Descriptor, ...]:
        return getattr(self, axis.value)

    @property
    def all(self) -> tuple[Descriptor, ...]:
        return self.status + self.career + self.persona

    def by_id(self, descriptor_id: str) -> Descriptor:
        for d in self.all:
            if d.id == descriptor_id:
                return d
        raise KeyError(descriptor_id)


@dataclass(frozen=True)
class CompositionalSeedSet:
    """Stage-2 building blocks: both status levels plus the k most
    female-polar and k most male-polar descriptors per non-status axis."""

    status: tuple[Descriptor, ...]
    career_f: tuple[Descriptor, ...]
    career_m: tuple[Descriptor, ...]
    persona_f: tuple[Descriptor, ...]
    persona_m: tuple[Descriptor, ...]

    def __post_init__(self):
        if len(self.status) != 2:
            raise InsufficientDescriptors("seed set needs exactly 2 status descriptors")
        k = len(self.career_f)
        if k < 1 or any(
            len(group) != k
            for group in (self.career_m, self.persona_f, self.persona_m)
        ):
            raise InsufficientDescriptors(
                "seed set needs the same k >= 1 descriptors per polarity per axis"
            )
        overlap = set(d.id for d in self.career_f) & set(d.id for d in self.career_m)
        overlap |= set(d.id for d in self.persona_f) & set(d.id for d in self.persona_m)
        if overlap:
            raise InsufficientDescriptors(
                f"polar groups overlap: {sorted(overlap)}"
            )

    @property
    def careers(self) -> tuple[Descriptor, ...]:
        return self.career_f + self.career_m

    @property
    def personas(self) -> tuple[Descriptor, ...]:
        return self.persona_f + self.persona_m

    def polarity(self, descriptor_id: str) -> Optional[str]:
        """Seed polarity of a descriptor: 'F', 'M', or None for status."""
        if any(d.id == descriptor_id for d in self.career_f + self.persona_f):
            return "F"
        if any(d.id == descriptor_id for d in self.career_m + self.persona_m):
            return "M"
        return None


def realize(
    config: SemanticConfig,
    template: PromptTemplate,
    transcript: Transcript,
    sample_index: int = 0,
) -> InstructionJob:
    """Realize one configuration into a concrete instruction job."""
    return InstructionJob(
        condition_id=config.condition_id,
        instruction=template.render(config),
        transcript_id=transcript.id,
        template_id=template.id,
        transcript=transcript.text,
        sample_index=sample_index,
        config=config,
    )


def _jobs_for_conditions(
    configs: Sequence[SemanticConfig],
    templates: Sequence[PromptTemplate],
    transcripts: Sequence[Transcript],
) -> list[InstructionJob]:
    jobs = []
    for config in configs:
        index = 0
        for transcript in transcripts:
            for template in templates:
                jobs.append(realize(config, template, transcript, index))
                index += 1
    return jobs


def replicate_jobs(jobs: Sequence[InstructionJob], copies: int) -> list[InstructionJob]:
    """Stack ``copies`` passes over a job list, renumbering sample indices.

    Useful when one template x transcript grid gives fewer samples per
    condition than an analysis needs; the clones differ only in
    ``sample_index``, so a stochastic probability source still treats them
    as distinct draws.
    """
    if copies < 1:
        raise ValueError("copies must be >= 1")
    out: list[InstructionJob] = []
    counters: dict[str, int] = {}
    for _ in range(copies):
        for job in jobs:
            index = counters.get(job.condition_id, 0)
            out.append(dataclasses.replace(job, sample_index=index))
            counters[job.condition_id] = index + 1
    return out


def enumerate_univariate(
    lexicon: Lexicon,
    templates: Sequence[PromptTemplate],
    transcripts: Sequence[Transcript],
) -> list[InstructionJob]:
    """Stage 1: one condition per descriptor, remaining slots empty.

    Yields ``len(lexicon.all) * len(templates) * len(transcripts)`` jobs;
    with the default 69-descriptor lexicon and the 10 x 10 grid this is
    6,900 jobs over 69 conditions.
    """
    configs = [univariate(d) for d in lexicon.all]
    return _jobs_for_conditions(configs, templates, transcripts)


def select_polar_descriptors(
    lexicon: Lexicon,
    stage1_p_hat: Mapping[str, float],
    k: int = 2,
) -> CompositionalSeedSet:
    """Pick the k most female- and male-polar descriptors per non-status axis.

    ``stage1_p_hat`` maps descriptor id to the stage-1 empirical female
    probability and must cover every career and persona descriptor. Ties are
    broken lexicographically: the female group prefers the earliest ids, the
    male group the latest, so the two groups never overlap while the axis
    holds at least 2k descriptors.
    """
    missing = [
        d.id for d in lexicon.career + lexicon.persona if d.id not in stage1_p_hat
    ]
    if missing:
        raise MissingStage1(f"no stage-1 statistics for descriptors: {missing}")
    if len(lexicon.status) != 2:
        raise InsufficientDescriptors("status axis must hold exactly 2 descriptors")

    def polar(axis: Axis, descriptors: Sequence[Descriptor]) -> tuple[tuple, tuple]:
        if len(descriptors) < 2 * k:
            raise InsufficientDescriptors(
                f"axis {axis.value!r} holds {len(descriptors)} "
                f"descriptors, need at least {2 * k}"
            )
        # One ranking, walked from both ends, keeps the groups disjoint.
        ranked = sorted(descriptors, key=lambda d: (-stage1_p_hat[d.id], d.id))
        return tuple(ranked[:k]), tuple(ranked[::-1][:k])

    career_f, career_m = polar(Axis.CAREER, lexicon.career)
    persona_f, persona_m = polar(Axis.PERSONA, lexicon.persona)
    return CompositionalSeedSet(
        status=tuple(lexicon.status),
        career_f=career_f,
        career_m=career_m,
        persona_f=persona_f,
        persona_m=persona_m,
    )


def bi_configs(seed: CompositionalSeedSet) -> list[SemanticConfig]:
    """All stage-2 pair configurations: status x career, status x persona,
    career x persona, with the third slot left empty."""
    configs = []
    for s in seed.status:
        for c in seed.careers:
            configs.append(compose(s, c))
    for s in seed.status:
        for p in seed.personas:
            configs.append(compose(s, p))
    for c in seed.careers:
        for p in seed.personas:
            configs.append(compose(c, p))
    return configs


def tri_configs(seed: CompositionalSeedSet) -> list[SemanticConfig]:
    """All stage-2 triple configurations (status x career x persona)."""
    return [
        compose(s, c, p)
        for s in seed.status
        for c in seed.careers
        for p in seed.personas
    ]


def enumerate_bi(
    seed: CompositionalSeedSet,
    templates: Sequence[PromptTemplate],
    transcripts: Sequence[Transcript],
) -> list[InstructionJob]:
    """Stage 2 pairs; the default seed (k=2) yields 32 conditions."""
    return _jobs_for_conditions(bi_configs(seed), templates, transcripts)


def enumerate_tri(
    seed: CompositionalSeedSet,
    templates: Sequence[PromptTemplate],
    transcripts: Sequence[Transcript],
) -> list[InstructionJob]:
    """Stage 2 triples; the default seed (k=2) yields 2*4*4 = 32 conditions."""
    return _jobs_for_conditions(tri_configs(seed), templates, transcripts)
