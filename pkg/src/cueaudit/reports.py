"""Audit orchestration: enumerate, score, aggregate, render.

Each ``run_*`` entry point consumes an :class:`~cueaudit.manifest.AuditManifest`,
drives the underlying modules, and writes three kinds of artifact into the
manifest's output directory:

* row-level JSON lines (pure records, no provenance fields),
* a summary JSON document carrying provenance (manifest hash, seed,
  iteration count, toolkit version) plus the aggregate findings,
* a fixed-width text rendering with bucket markers (▲ positive, ▼
  negative, · not significant).

Outputs never contain timestamps or absolute paths, so a rerun of the same
manifest is byte-identical.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from . import __version__
from .axes import Axis, Descriptor, SemanticConfig, univariate
from .config import AuditConfig, load_config
from .encoderbias import (
    EmbeddingSet,
    axis_effect_size,
    delta,
    read_embeddings,
    standardized_scores,
)
from .errors import (
    DegenerateVariance,
    EmptyAnchorSet,
    IncompleteLedger,
    MalformedConfig,
    SchemaViolation,
)
from .interactions import (
    Bucket,
    InteractionResult,
    Synergy,
    Tier,
    TierAssignment,
    classify_bucket,
    color_class,
    evaluate_interaction,
    spec_for_config,
    stratify,
    synergy_sign,
)
from .ledger import (
    ConditionStats,
    ContinuityPolicy,
    Ledger,
    UtteranceRecord,
    condition_stats,
    ingest,
)
from .manifest import AuditManifest, load_oracle
from .oracle import simulate
from .promptspace import (
    CompositionalSeedSet,
    InstructionJob,
    bi_configs,
    enumerate_bi,
    enumerate_tri,
    enumerate_univariate,
    select_polar_descriptors,
    tri_configs,
)
from .wire import read_ledger, write_jobs, write_ledger

PARADIGM_NAMES = {
    "additive-smoothness": "Additive Smoothness",
    "asymmetric-veto": "Asymmetric Veto Power",
    "prior-saturation": "Prior Saturation",
    "unclassified": "Unclassified",
}

#: Largest |interaction| still compatible with a purely additive profile.
ADDITIVE_I_BOUND = 1.81

#: Composite probability beyond which a congruent dark cell reads as saturation.
SATURATION_P = 0.95


# --- shared plumbing ----------------------------------------------------------


def _provenance(manifest: AuditManifest) -> dict:
    return {
        "toolkit_version": __version__,
        "manifest_sha256": manifest.manifest_hash,
        "seed": manifest.seed,
        "iterations": manifest.iterations,
        "outcome": manifest.outcome,
    }


def _write_jsonl(path: Path, rows: Sequence[dict]) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")
    return path


def _write_json(path: Path, doc: dict) -> Path:
    path.write_text(
        json.dumps(doc, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    return path


def _write_text(path: Path, lines: Sequence[str]) -> Path:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def fmt(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    lines = [fmt(headers), fmt(["-" * w for w in widths])]
    lines.extend(fmt(row) for row in rows)
    return lines


def _header_lines(title: str, manifest: AuditManifest) -> list[str]:
    return [
        title,
        f"toolkit {__version__}  manifest sha256:{manifest.manifest_hash[:16]}  "
        f"seed {manifest.seed}  iterations {manifest.iterations}",
        "",
    ]


def _mark(bucket: Bucket, sign: Synergy) -> str:
    if bucket is Bucket.LIGHT:
        return "·"
    return "▲" if sign is Synergy.FEMALE else "▼"


def _policy(manifest: AuditManifest) -> ContinuityPolicy:
    return ContinuityPolicy(outcome=manifest.outcome)


def _records_for_stage(
    manifest: AuditManifest,
    jobs: Sequence[InstructionJob],
    stage: str,
    written: Optional[dict] = None,
) -> list[UtteranceRecord]:
    """Probabilities for one stage: simulate from the oracle, or read a ledger.

    In oracle mode, when a ``written`` collector is supplied, the enumerated
    jobs and the simulated ledger are also written to the output directory,
    mirroring what a live adapter run would leave behind.
    """
    if manifest.oracle_path is not None:
        spec = load_oracle(manifest.oracle_path)
        records = simulate(spec, jobs)
        if written is not None:
            out = manifest.output_dir
            jobs_path = out / f"jobs_{stage}.jsonl"
            ledger_path = out / f"ledger_{stage}.jsonl"
            write_jobs(jobs, jobs_path)
            write_ledger(records, ledger_path)
            written[f"jobs_{stage}"] = jobs_path
            written[f"ledger_{stage}"] = ledger_path
        return records
    ledger_path = getattr(manifest, f"ledger_{stage}")
    if ledger_path is None:
        raise MalformedConfig(
            f"manifest provides neither an oracle nor a {stage} ledger"
        )
    return list(read_ledger(ledger_path))


def _check_complete(ledger: Ledger, condition_ids: Sequence[str], what: str) -> None:
    missing = tuple(c for c in condition_ids if c not in ledger or ledger.n(c) < 1)
    if missing:
        raise IncompleteLedger(
            f"{what} ledger lacks {len(missing)} condition(s)", missing=missing
        )


def _has_probability_source(manifest: AuditManifest) -> bool:
    return manifest.oracle_path is not None or manifest.ledger_stage1 is not None


# --- stage 1 -------------------------------------------------------------------


@dataclass(frozen=True)
class Stage1Row:
    descriptor_id: str
    surface: str
    axis: str
    subgroup: Optional[str]
    n: int
    p_hat: float
    logit: float
    tier: Tier
    tier_p_value: float


@dataclass(frozen=True)
class SubgroupSummary:
    label: str
    n: int
    mean_p_hat: float
    sd_p_hat: float


@dataclass(frozen=True)
class Stage1Report:
    rows: tuple[Stage1Row, ...]
    subgroups: tuple[SubgroupSummary, ...]
    paths: Mapping[str, Path]

    def p_hat_by_descriptor(self) -> dict[str, float]:
        return {r.descriptor_id: r.p_hat for r in self.rows}

    def tier_by_descriptor(self) -> dict[str, Tier]:
        return {r.descriptor_id: r.tier for r in self.rows}


def _stage1_core(
    manifest: AuditManifest,
    config: AuditConfig,
    written: Optional[dict] = None,
) -> tuple[Ledger, list[Stage1Row]]:
    jobs = enumerate_univariate(config.lexicon, config.templates, config.transcripts)
    ledger = ingest(_records_for_stage(manifest, jobs, "stage1", written))
    wanted = [univariate(d).condition_id for d in config.lexicon.all]
    _check_complete(ledger, wanted, "stage-1")

    policy = _policy(manifest)
    desc_stats: dict[str, ConditionStats] = {}
    for d in config.lexicon.all:
        desc_stats[d.id] = condition_stats(ledger, univariate(d).condition_id, policy)
    assignments = {a.descriptor_id: a for a in stratify(desc_stats)}

    rows = []
    for d in config.lexicon.all:
        s = desc_stats[d.id]
        a = assignments[d.id]
        rows.append(
            Stage1Row(
                descriptor_id=d.id,
                surface=d.surface,
                axis=d.axis.value,
                subgroup=d.subgroup,
                n=s.n,
                p_hat=s.p_hat,
                logit=s.logit,
                tier=a.tier,
                tier_p_value=a.p_value,
            )
        )
    return ledger, rows


_TIER_ORDER = (Tier.FEMALE_LEANING, Tier.MIXED, Tier.MALE_LEANING)


def _subgroup_panels(rows: Sequence[Stage1Row]) -> list[SubgroupSummary]:
    """Axis-level panel: status pooled, careers by tier, personas by subgroup."""
    panels: list[tuple[str, list[float]]] = []
    status = [r.p_hat for r in rows if r.axis == Axis.STATUS.value]
    panels.append(("status — all", status))
    for tier in _TIER_ORDER:
        vals = [
            r.p_hat
            for r in rows
            if r.axis == Axis.CAREER.value and r.tier is tier
        ]
        if vals:
            panels.append((f"career — {tier.value}", vals))
    seen: dict[str, list[float]] = {}
    for r in rows:
        if r.axis == Axis.PERSONA.value:
            seen.setdefault(r.subgroup or "unspecified", []).append(r.p_hat)
    for label, vals in seen.items():
        panels.append((f"persona — {label}", vals))

    out = []
    for label, vals in panels:
        arr = np.asarray(vals, dtype=float)
        sd = float(arr.std(ddof=1)) if arr.size >= 2 else 0.0
        out.append(
            SubgroupSummary(
                label=label, n=arr.size, mean_p_hat=float(arr.mean()), sd_p_hat=sd
            )
        )
    return out


def run_stage1(manifest: AuditManifest) -> Stage1Report:
    """Univariate audit: per-descriptor female probability and gender tier."""
    config = load_config(
        manifest.lexicon, manifest.templates, manifest.transcripts, manifest.anchors
    )
    manifest.output_dir.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}
    _, rows = _stage1_core(manifest, config, written)
    subgroups = _subgroup_panels(rows)

    out = manifest.output_dir
    row_dicts = [
        {
            "descriptor_id": r.descriptor_id,
            "surface": r.surface,
            "axis": r.axis,
            "subgroup": r.subgroup,
            "n": r.n,
            "p_hat": r.p_hat,
            "logit": r.logit,
            "tier": r.tier.value,
            "tier_p_value": r.tier_p_value,
        }
        for r in rows
    ]
    written["rows"] = _write_jsonl(out / "stage1.jsonl", row_dicts)

    tier_counts: dict[str, int] = {t.value: 0 for t in _TIER_ORDER}
    for r in rows:
        tier_counts[r.tier.value] += 1
    summary = {
        "provenance": _provenance(manifest),
        "files": {"rows": "stage1.jsonl", "text": "stage1.txt"},
        "subgroups": [dataclasses.asdict(s) for s in subgroups],
        "tier_counts": tier_counts,
    }

    lines = _header_lines("STAGE 1 — UNIVARIATE DESCRIPTOR AUDIT", manifest)
    lines.append("AXIS-LEVEL SUMMARY")
    lines.extend(
        _table(
            ["subgroup", "n", "mean P̂", "sd"],
            [
                [s.label, str(s.n), f"{s.mean_p_hat:.2f}", f"{s.sd_p_hat:.2f}"]
                for s in subgroups
            ],
        )
    )
    lines.append("")
    lines.append("DESCRIPTOR DETAIL")
    lines.extend(
        _table(
            ["descriptor", "axis", "subgroup", "n", "P̂", "tier", "p(binomial)"],
            [
                [
                    r.surface,
                    r.axis,
                    r.subgroup or "—",
                    str(r.n),
                    f"{r.p_hat:.2f}",
                    r.tier.value,
                    f"{r.tier_p_value:.4f}",
                ]
                for r in rows
            ],
        )
    )
    written["text"] = _write_text(out / "stage1.txt", lines)

    if manifest.figures:
        from .figures import stage1_figure

        written["figure"] = stage1_figure(rows, out / "stage1.png")
        summary["files"]["figure"] = "stage1.png"
    written["summary"] = _write_json(out / "stage1_summary.json", summary)
    return Stage1Report(rows=tuple(rows), subgroups=tuple(subgroups), paths=written)


# --- stage 2 -------------------------------------------------------------------


@dataclass(frozen=True)
class CompositeRow:
    """One evaluated composite condition (a pair or a triple)."""

    kind: str  # "pair" | "triple"
    table: str
    cell: str
    condition_id: str
    descriptor_ids: tuple[str, ...]
    cue_polarities: tuple[Optional[str], ...]
    n: int
    p_hat: float
    i_value: float
    p_value: float
    bucket: Bucket
    sign: Synergy
    color: str


@dataclass(frozen=True)
class CellRow:
    """Mean of the per-composite statistics sharing one rendered cell."""

    kind: str
    table: str
    cell: str
    n_conditions: int
    mean_p_hat: float
    mean_i: float
    mean_p_value: float
    bucket: Bucket
    sign: Synergy
    color: str
    opposing: bool
    congruent: bool


@dataclass(frozen=True)
class ParadigmCall:
    label: str
    pretty: str
    rule: str
    max_abs_cell_i: float
    dark_cells: tuple[str, ...]


@dataclass(frozen=True)
class Stage2Report:
    composites: tuple[CompositeRow, ...]
    cells: tuple[CellRow, ...]
    paradigm: ParadigmCall
    seed_set: CompositionalSeedSet
    paths: Mapping[str, Path]


def _status_tier_polarity(tiers: Mapping[str, Tier], descriptor_id: str) -> Optional[str]:
    tier = tiers.get(descriptor_id)
    if tier is Tier.FEMALE_LEANING:
        return "F"
    if tier is Tier.MALE_LEANING:
        return "M"
    return None


def _cue_labels(
    config: SemanticConfig,
    seed_set: CompositionalSeedSet,
    tiers: Mapping[str, Tier],
) -> tuple[list[str], list[Optional[str]], str]:
    """Cell-label parts, cue polarities, and the table name for a composite."""
    parts: list[str] = []
    polarities: list[Optional[str]] = []
    axes: list[str] = []
    for d in config.descriptors:
        if d.axis is Axis.STATUS:
            parts.append(d.surface)
            polarities.append(_status_tier_polarity(tiers, d.id))
        else:
            polarity = seed_set.polarity(d.id)
            parts.append(f"{polarity}-{d.axis.value}")
            polarities.append(polarity)
        axes.append(d.axis.value)
    table = " x ".join(axes) if config.arity == 2 else "status x career x persona"
    return parts, polarities, table


def _evaluate_composites(
    merged: Ledger,
    configs: Sequence[SemanticConfig],
    kind: str,
    seed_set: CompositionalSeedSet,
    tiers: Mapping[str, Tier],
    manifest: AuditManifest,
) -> list[CompositeRow]:
    policy = _policy(manifest)
    rows = []
    for config in configs:
        spec = spec_for_config(config)
        result: InteractionResult = evaluate_interaction(
            merged, spec, manifest.iterations, manifest.seed, policy
        )
        parts, polarities, table = _cue_labels(config, seed_set, tiers)
        stats = condition_stats(merged, config.condition_id, policy)
        rows.append(
            CompositeRow(
                kind=kind,
                table=table,
                cell=" × ".join(parts),
                condition_id=config.condition_id,
                descriptor_ids=tuple(d.id for d in config.descriptors),
                cue_polarities=tuple(polarities),
                n=stats.n,
                p_hat=stats.p_hat,
                i_value=result.i_value,
                p_value=result.p_value,
                bucket=result.bucket,
                sign=result.sign,
                color=color_class(result.i_value, result.p_value),
            )
        )
    return rows


def _aggregate_cells(composites: Sequence[CompositeRow]) -> list[CellRow]:
    order: list[tuple[str, str, str]] = []
    groups: dict[tuple[str, str, str], list[CompositeRow]] = {}
    for row in composites:
        key = (row.kind, row.table, row.cell)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(row)

    cells = []
    for key in order:
        members = groups[key]
        mean_i = float(np.mean([m.i_value for m in members]))
        mean_p = float(np.mean([m.p_value for m in members]))
        polarities = [p for p in members[0].cue_polarities if p is not None]
        cells.append(
            CellRow(
                kind=key[0],
                table=key[1],
                cell=key[2],
                n_conditions=len(members),
                mean_p_hat=float(np.mean([m.p_hat for m in members])),
                mean_i=mean_i,
                mean_p_value=mean_p,
                bucket=classify_bucket(mean_i, mean_p),
                sign=synergy_sign(mean_i),
                color=color_class(mean_i, mean_p),
                opposing={"F", "M"} <= set(polarities),
                congruent=len(polarities) >= 2 and len(set(polarities)) == 1,
            )
        )
    return cells


def classify_paradigm(cells: Sequence[CellRow]) -> ParadigmCall:
    """Heuristic composition-paradigm call from the rendered cell grid.

    Additive when every cell stays small and insignificant; veto when some
    dark cell mixes female- and male-leaning cues; saturation when a dark
    cell sits under same-polarity cues at an extreme composite probability.
    The thresholds are the bucket thresholds plus the additive bound, and
    the call is labeled heuristic in all outputs.
    """
    max_abs = max(abs(c.mean_i) for c in cells)
    dark = [c for c in cells if c.bucket is Bucket.DARK]
    if max_abs <= ADDITIVE_I_BOUND and all(c.mean_p_value >= 0.05 for c in cells):
        label = "additive-smoothness"
    elif any(c.opposing for c in dark):
        label = "asymmetric-veto"
    elif any(
        c.congruent and (c.mean_p_hat >= SATURATION_P or c.mean_p_hat <= 1 - SATURATION_P)
        for c in dark
    ):
        label = "prior-saturation"
    else:
        label = "unclassified"
    return ParadigmCall(
        label=label,
        pretty=PARADIGM_NAMES[label],
        rule="heuristic",
        max_abs_cell_i=max_abs,
        dark_cells=tuple(f"{c.kind}: {c.cell}" for c in dark),
    )


def run_stage2(manifest: AuditManifest) -> Stage2Report:
    """Compositional audit: interaction terms, cells, and the paradigm call."""
    config = load_config(
        manifest.lexicon, manifest.templates, manifest.transcripts, manifest.anchors
    )
    manifest.output_dir.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}

    ledger1, stage1_rows = _stage1_core(manifest, config)
    p_hat = {r.descriptor_id: r.p_hat for r in stage1_rows}
    tiers = {r.descriptor_id: r.tier for r in stage1_rows}
    seed_set = select_polar_descriptors(config.lexicon, p_hat, manifest.polar_k)

    bi = bi_configs(seed_set)
    tri = tri_configs(seed_set)
    bi_jobs = enumerate_bi(seed_set, config.templates, config.transcripts)
    tri_jobs = enumerate_tri(seed_set, config.templates, config.transcripts)
    records_bi = _records_for_stage(manifest, bi_jobs, "bi", written)
    records_tri = _records_for_stage(manifest, tri_jobs, "tri", written)

    merged_records: list[UtteranceRecord] = []
    for cid in ledger1.condition_ids:
        merged_records.extend(ledger1.records(cid))
    merged_records.extend(records_bi)
    merged_records.extend(records_tri)
    merged = ingest(merged_records)
    _check_complete(merged, [c.condition_id for c in bi], "pair")
    _check_complete(merged, [c.condition_id for c in tri], "triple")

    pairs = _evaluate_composites(merged, bi, "pair", seed_set, tiers, manifest)
    triples = _evaluate_composites(merged, tri, "triple", seed_set, tiers, manifest)
    composites = pairs + triples
    cells = _aggregate_cells(composites)
    paradigm = classify_paradigm(cells)

    out = manifest.output_dir
    written["composites"] = _write_jsonl(
        out / "stage2_composites.jsonl",
        [
            {
                "kind": r.kind,
                "table": r.table,
                "cell": r.cell,
                "condition_id": r.condition_id,
                "descriptor_ids": list(r.descriptor_ids),
                "cue_polarities": list(r.cue_polarities),
                "n": r.n,
                "p_hat": r.p_hat,
                "i_value": r.i_value,
                "p_value": r.p_value,
                "bucket": r.bucket.value,
                "sign": r.sign.value,
                "color": r.color,
            }
            for r in composites
        ],
    )
    written["cells"] = _write_jsonl(
        out / "stage2_cells.jsonl",
        [
            {
                "kind": c.kind,
                "table": c.table,
                "cell": c.cell,
                "n_conditions": c.n_conditions,
                "mean_p_hat": c.mean_p_hat,
                "mean_i": c.mean_i,
                "mean_p_value": c.mean_p_value,
                "bucket": c.bucket.value,
                "sign": c.sign.value,
                "color": c.color,
                "opposing": c.opposing,
                "congruent": c.congruent,
            }
            for c in cells
        ],
    )

    bucket_counts = {b.value: 0 for b in Bucket}
    for c in cells:
        bucket_counts[c.bucket.value] += 1
    summary = {
        "provenance": _provenance(manifest),
        "files": {
            "composites": "stage2_composites.jsonl",
            "cells": "stage2_cells.jsonl",
            "text": "stage2.txt",
        },
        "seed_set": {
            "status": [d.id for d in seed_set.status],
            "career_female": [d.id for d in seed_set.career_f],
            "career_male": [d.id for d in seed_set.career_m],
            "persona_female": [d.id for d in seed_set.persona_f],
            "persona_male": [d.id for d in seed_set.persona_m],
        },
        "cell_bucket_counts": bucket_counts,
        "paradigm": {
            "label": paradigm.label,
            "name": paradigm.pretty,
            "rule": paradigm.rule,
            "max_abs_cell_i": paradigm.max_abs_cell_i,
            "dark_cells": list(paradigm.dark_cells),
        },
    }

    lines = _header_lines("STAGE 2 — COMPOSITIONAL INTERACTION AUDIT", manifest)
    for kind, title in (("pair", "PAIR CELLS"), ("triple", "TRIPLE CELLS")):
        lines.append(title)
        lines.extend(
            _table(
                ["table", "cell", "k", "mean P̂", "mean 𝓘", "mean p", "bucket", ""],
                [
                    [
                        c.table,
                        c.cell,
                        str(c.n_conditions),
                        f"{c.mean_p_hat:.2f}",
                        f"{c.mean_i:+.2f}",
                        f"{c.mean_p_value:.4f}",
                        c.color,
                        _mark(c.bucket, c.sign),
                    ]
                    for c in cells
                    if c.kind == kind
                ],
            )
        )
        lines.append("")
    lines.append(
        f"PARADIGM (heuristic): {paradigm.pretty} "
        f"[max |𝓘| over cells = {paradigm.max_abs_cell_i:.2f}, "
        f"dark cells: {len(paradigm.dark_cells)}]"
    )
    written["text"] = _write_text(out / "stage2.txt", lines)

    if manifest.figures:
        from .figures import stage2_figure

        written["figure_pairs"] = stage2_figure(
            [c for c in cells if c.kind == "pair"], out / "stage2_pairs.png"
        )
        written["figure_triples"] = stage2_figure(
            [c for c in cells if c.kind == "triple"], out / "stage2_triples.png"
        )
        summary["files"]["figure_pairs"] = "stage2_pairs.png"
        summary["files"]["figure_triples"] = "stage2_triples.png"
    written["summary"] = _write_json(out / "stage2_summary.json", summary)

    return Stage2Report(
        composites=tuple(composites),
        cells=tuple(cells),
        paradigm=paradigm,
        seed_set=seed_set,
        paths=written,
    )


# --- encoder bias ----------------------------------------------------------------


@dataclass(frozen=True)
class EncoderWordRow:
    encoder: str
    key: str
    surface: str
    axis: str
    subgroup: str
    delta: float
    z_score: float


@dataclass(frozen=True)
class EncoderGroupRow:
    encoder: str
    subgroup: str
    n_words: int
    mean_delta: float
    std_delta: Optional[float]
    cohens_d: Optional[float]
    color: str


@dataclass(frozen=True)
class EncoderReport:
    words: tuple[EncoderWordRow, ...]
    groups: tuple[EncoderGroupRow, ...]
    encoders: tuple[str, ...]
    paths: Mapping[str, Path]


def _career_tier_labels(manifest: AuditManifest, config: AuditConfig) -> Optional[dict]:
    if not _has_probability_source(manifest):
        return None
    _, rows = _stage1_core(manifest, config)
    return {
        r.descriptor_id: f"career — {r.tier.value}"
        for r in rows
        if r.axis == Axis.CAREER.value
    }


def _subgroup_label(d: Descriptor, career_tiers: Optional[dict]) -> str:
    if d.axis is Axis.STATUS:
        return "status — all"
    if d.axis is Axis.CAREER:
        if career_tiers is not None:
            return career_tiers[d.id]
        return "career — all"
    return f"persona — {d.subgroup or 'unspecified'}"


def run_encoder_report(manifest: AuditManifest) -> EncoderReport:
    """Score embedding files: per-word Δ and z, per-subgroup Cohen's d."""
    if not manifest.embeddings:
        raise MalformedConfig("manifest lists no embedding files")
    config = load_config(
        manifest.lexicon, manifest.templates, manifest.transcripts, manifest.anchors
    )
    manifest.output_dir.mkdir(parents=True, exist_ok=True)
    career_tiers = _career_tier_labels(manifest, config)
    by_id = {d.id: d for d in config.lexicon.all}

    words: list[EncoderWordRow] = []
    groups: list[EncoderGroupRow] = []
    encoders: list[str] = []
    for path in manifest.embeddings:
        emb: EmbeddingSet = read_embeddings(path)
        encoders.append(emb.encoder)
        female = [r for key in config.anchors.female for r in emb.for_key(key)]
        male = [r for key in config.anchors.male for r in emb.for_key(key)]
        if not female or not male:
            raise EmptyAnchorSet(
                f"{path}: no embeddings found for one or both anchor sets"
            )
        present = [d for d in config.lexicon.all if emb.for_key(d.id)]
        if not present:
            raise SchemaViolation(f"{path}: no descriptor embeddings present")
        deltas = {
            d.id: delta(list(emb.for_key(d.id)), female, male) for d in present
        }
        z = standardized_scores(deltas)
        grouped: dict[str, list[str]] = {}
        for d in present:
            label = _subgroup_label(d, career_tiers)
            grouped.setdefault(label, []).append(d.id)
            words.append(
                EncoderWordRow(
                    encoder=emb.encoder,
                    key=d.id,
                    surface=d.surface,
                    axis=d.axis.value,
                    subgroup=label,
                    delta=deltas[d.id],
                    z_score=z[d.id],
                )
            )
        for label, ids in grouped.items():
            vals = [deltas[i] for i in ids]
            try:
                summary = axis_effect_size(label, vals)
                d_val: Optional[float] = summary.cohens_d
                sd_val: Optional[float] = summary.std_delta
            except DegenerateVariance:
                d_val = None
                sd_val = None
            mean = float(np.mean(vals))
            groups.append(
                EncoderGroupRow(
                    encoder=emb.encoder,
                    subgroup=label,
                    n_words=len(vals),
                    mean_delta=mean,
                    std_delta=sd_val,
                    cohens_d=d_val,
                    color="orange" if mean >= 0 else "blue",
                )
            )

    out = manifest.output_dir
    written: dict[str, Path] = {}
    written["words"] = _write_jsonl(
        out / "encoder.jsonl",
        [
            {
                "encoder": w.encoder,
                "key": w.key,
                "surface": w.surface,
                "axis": w.axis,
                "subgroup": w.subgroup,
                "delta": w.delta,
                "z_score": w.z_score,
            }
            for w in words
        ],
    )
    summary_doc = {
        "provenance": _provenance(manifest),
        "files": {"words": "encoder.jsonl", "text": "encoder.txt"},
        "encoders": encoders,
        "groups": [
            {
                "encoder": g.encoder,
                "subgroup": g.subgroup,
                "n_words": g.n_words,
                "mean_delta": g.mean_delta,
                "std_delta": g.std_delta,
                "cohens_d": g.cohens_d,
                "color": g.color,
            }
            for g in groups
        ],
    }

    lines = _header_lines("ENCODER SEMANTIC-BIAS REPORT", manifest)
    labels: list[str] = []
    for g in groups:
        if g.subgroup not in labels:
            labels.append(g.subgroup)
    headers = ["subgroup"] + [f"{e} d" for e in encoders]
    table_rows = []
    for label in labels:
        row = [label]
        for e in encoders:
            match = [g for g in groups if g.encoder == e and g.subgroup == label]
            if match and match[0].cohens_d is not None:
                g = match[0]
                row.append(f"{g.cohens_d:+.2f} ({g.color})")
            else:
                row.append("—")
        table_rows.append(row)
    lines.append("GROUP-LEVEL EFFECT SIZES (one-sample Cohen's d of Δ)")
    lines.extend(_table(headers, table_rows))
    written["text"] = _write_text(out / "encoder.txt", lines)

    if manifest.figures:
        from .figures import encoder_figure

        written["figure"] = encoder_figure(groups, out / "encoder.png")
        summary_doc["files"]["figure"] = "encoder.png"
    written["summary"] = _write_json(out / "encoder_summary.json", summary_doc)

    return EncoderReport(
        words=tuple(words),
        groups=tuple(groups),
        encoders=tuple(encoders),
        paths=written,
    )


# --- job materialization ------------------------------------------------------


def run_enumerate(manifest: AuditManifest) -> dict[str, Path]:
    """Write job manifests without touching any probability source's outputs.

    The univariate grid always materializes. The composite grids need the
    stage-1 probabilities (they decide which polar descriptors seed the
    compositions), so they are written only when the manifest carries an
    oracle or a stage-1 ledger.
    """
    config = load_config(
        manifest.lexicon, manifest.templates, manifest.transcripts, manifest.anchors
    )
    out = manifest.output_dir
    out.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}

    jobs1 = enumerate_univariate(config.lexicon, config.templates, config.transcripts)
    path1 = out / "jobs_stage1.jsonl"
    write_jobs(jobs1, path1)
    written["jobs_stage1"] = path1

    if _has_probability_source(manifest):
        _, rows = _stage1_core(manifest, config)
        p_hat = {r.descriptor_id: r.p_hat for r in rows}
        seed_set = select_polar_descriptors(config.lexicon, p_hat, manifest.polar_k)
        for stage, jobs in (
            ("bi", enumerate_bi(seed_set, config.templates, config.transcripts)),
            ("tri", enumerate_tri(seed_set, config.templates, config.transcripts)),
        ):
            path = out / f"jobs_{stage}.jsonl"
            write_jobs(jobs, path)
            written[f"jobs_{stage}"] = path
    return written


def run_simulate(manifest: AuditManifest) -> dict[str, Path]:
    """Materialize jobs plus oracle-simulated ledgers for all three grids."""
    if manifest.oracle_path is None:
        raise MalformedConfig("simulate requires an oracle in the manifest")
    config = load_config(
        manifest.lexicon, manifest.templates, manifest.transcripts, manifest.anchors
    )
    manifest.output_dir.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}
    _, rows = _stage1_core(manifest, config, written)
    p_hat = {r.descriptor_id: r.p_hat for r in rows}
    seed_set = select_polar_descriptors(config.lexicon, p_hat, manifest.polar_k)
    _records_for_stage(
        manifest,
        enumerate_bi(seed_set, config.templates, config.transcripts),
        "bi",
        written,
    )
    _records_for_stage(
        manifest,
        enumerate_tri(seed_set, config.templates, config.transcripts),
        "tri",
        written,
    )
    return written


# --- full pipeline ----------------------------------------------------------------


def run_all(manifest: AuditManifest) -> dict[str, Mapping[str, Path]]:
    """Stage 1, stage 2, and (when embeddings are listed) the encoder report."""
    results = {
        "stage1": run_stage1(manifest).paths,
        "stage2": run_stage2(manifest).paths,
    }
    if manifest.embeddings:
        results["encoder"] = run_encoder_report(manifest).paths
    return results
