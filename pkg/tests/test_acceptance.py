"""Acceptance suite: one test per release criterion, each printing a single
pass/fail line under ``pytest -v``.

Criteria 1-9 cover the core library; criterion 10 (synthesis-adapter
conformance) lives in the adapter package's own test suite and exercises the
same wire-format validators through the CLI.
"""

import math
import time

import numpy as np
import pytest

from cueaudit import (
    EmbeddingRecord,
    InteractionSpec,
    OracleSpec,
    UtteranceRecord,
    axis_effect_size,
    bi_configs,
    classify_bucket,
    condition_stats,
    corrected_logit,
    delta,
    enumerate_bi,
    enumerate_tri,
    enumerate_univariate,
    ingest,
    load_manifest,
    observed_interaction,
    permutation_test,
    replicate_jobs,
    run_all,
    select_polar_descriptors,
    sigmoid,
    simulate,
    spec_for_config,
    tri_configs,
    univariate,
)
from cueaudit.interactions import Bucket
from tests.conftest import write_manifest, write_oracle
from tests.test_reports import VETO_ORACLE, _toy_embeddings

LN_199 = 5.293304824724492  # ln(2*100 - 1), the n=100 clamp boundary


def _seed_set_from(config, ledger, k=2):
    p_hat = {
        d.id: condition_stats(ledger, univariate(d).condition_id).p_hat
        for d in config.lexicon.all
    }
    return select_polar_descriptors(config.lexicon, p_hat, k)


def _stage2_universe(config, oracle, copies=1, seed_set=None):
    """Simulate the full three-grid audit and return (ledger, bi, tri)."""
    uni_jobs = enumerate_univariate(
        config.lexicon, config.templates, config.transcripts
    )
    if copies > 1:
        uni_jobs = replicate_jobs(uni_jobs, copies)
    records = simulate(oracle, uni_jobs)
    if seed_set is None:
        seed_set = _seed_set_from(config, ingest(records))
    bi = bi_configs(seed_set)
    tri = tri_configs(seed_set)
    bi_jobs = enumerate_bi(seed_set, config.templates, config.transcripts)
    tri_jobs = enumerate_tri(seed_set, config.templates, config.transcripts)
    if copies > 1:
        bi_jobs = replicate_jobs(bi_jobs, copies)
        tri_jobs = replicate_jobs(tri_jobs, copies)
    records = records + simulate(oracle, bi_jobs) + simulate(oracle, tri_jobs)
    return ingest(records), bi, tri


def test_criterion_01_enumeration_cardinalities(config):
    started = time.perf_counter()
    uni_jobs = enumerate_univariate(
        config.lexicon, config.templates, config.transcripts
    )
    # Any distinct per-descriptor probabilities make the polar choice well
    # defined; enumeration counts do not depend on which descriptors win.
    p_hat = {d.id: (i + 1) / 70 for i, d in enumerate(config.lexicon.all)}
    seed_set = select_polar_descriptors(config.lexicon, p_hat, 2)
    bi = bi_configs(seed_set)
    tri = tri_configs(seed_set)
    bi_jobs = enumerate_bi(seed_set, config.templates, config.transcripts)
    tri_jobs = enumerate_tri(seed_set, config.templates, config.transcripts)
    elapsed = time.perf_counter() - started

    assert len({j.condition_id for j in uni_jobs}) == 69
    assert len(uni_jobs) == 6900
    assert len(bi) == 32 and len(bi_jobs) == 3200
    assert len(tri) == 32 and len(tri_jobs) == 3200
    assert elapsed < 1.0


def test_criterion_02_additive_null(config):
    rng = np.random.default_rng(7)
    weights = {d.id: float(rng.uniform(-1, 1)) for d in config.lexicon.all}
    oracle = OracleSpec(cue_weights=weights)  # additive, deterministic

    started = time.perf_counter()
    ledger, bi, tri = _stage2_universe(config, oracle)
    worst = max(
        abs(observed_interaction(ledger, spec_for_config(c))) for c in list(bi) + list(tri)
    )
    elapsed = time.perf_counter() - started

    assert worst <= 1e-9
    assert elapsed < 10.0


def test_criterion_03_injected_effect_recovery(config):
    started = time.perf_counter()
    rng = np.random.default_rng(13)
    weights = {d.id: float(rng.uniform(-0.2, 0.2)) for d in config.lexicon.all}
    base = OracleSpec(cue_weights=weights)

    # Fix the composite grid once; every oracle below reuses this seed set so
    # the injected conditions stay the same 32 pair conditions throughout.
    uni_jobs = enumerate_univariate(
        config.lexicon, config.templates, config.transcripts
    )
    seed_set = _seed_set_from(config, ingest(simulate(base, uni_jobs)))
    _, bi, tri = _stage2_universe(config, base, seed_set=seed_set)

    # Deterministic recovery: three pair terms and one triple term.
    pair_targets = {bi[0]: 0.5, bi[15]: -1.2, bi[31]: 3.0}
    tri_target = tri[7]
    injected = {
        frozenset(d.id for d in cfg.descriptors): value
        for cfg, value in pair_targets.items()
    }
    injected[frozenset(d.id for d in tri_target.descriptors)] = -1.2
    exact_oracle = OracleSpec(cue_weights=weights, injected_interactions=injected)
    ledger, _, _ = _stage2_universe(config, exact_oracle, seed_set=seed_set)
    for cfg, value in pair_targets.items():
        assert abs(observed_interaction(ledger, spec_for_config(cfg)) - value) <= 1e-9
    assert abs(observed_interaction(ledger, spec_for_config(tri_target)) + 1.2) <= 1e-9

    # Sampled recovery: every pair condition carries an injected term, the
    # label stream is bernoulli at n=1,000 per condition under one fixed seed.
    values = [0.5, -1.2, 3.0]
    true_terms = {
        cfg.condition_id: values[i % 3] for i, cfg in enumerate(bi)
    }
    sampled_oracle = OracleSpec(
        cue_weights=weights,
        injected_interactions={
            frozenset(d.id for d in cfg.descriptors): true_terms[cfg.condition_id]
            for cfg in bi
        },
        noise_mode="bernoulli",
        rng_seed=29,
    )
    ledger_big, bi_big, _ = _stage2_universe(
        config, sampled_oracle, copies=10, seed_set=seed_set
    )
    assert all(ledger_big.n(cfg.condition_id) == 1000 for cfg in bi_big)
    within = sum(
        abs(
            observed_interaction(ledger_big, spec_for_config(cfg))
            - true_terms[cfg.condition_id]
        )
        <= 0.5
        for cfg in bi_big
    )
    elapsed = time.perf_counter() - started

    assert within >= math.ceil(0.95 * 32)
    assert elapsed < 120.0


def test_criterion_04_reconstruction_identity(config):
    rng = np.random.default_rng(17)
    oracle = OracleSpec(
        cue_weights={d.id: float(rng.uniform(-1, 1)) for d in config.lexicon.all},
        injected_interactions={
            frozenset({"car_nurse", "per_blunt"}): -2.0,
            frozenset({"sta_high", "car_nurse", "per_blunt"}): 1.3,
        },
        noise_mode="bernoulli",
        rng_seed=3,
    )
    ledger, _, tri = _stage2_universe(config, oracle)

    started = time.perf_counter()
    worst = 0.0
    for cfg in tri:
        spec = spec_for_config(cfg)
        l_multi = condition_stats(ledger, spec.composite_id).logit
        l_uni = [condition_stats(ledger, cid).logit for cid in spec.univariate_ids]
        i_pairs = [
            observed_interaction(
                ledger,
                InteractionSpec(
                    order="pairwise",
                    composite_id=pid,
                    univariate_ids=pair_unis,
                ),
            )
            for pid, pair_unis in zip(
                spec.pairwise_ids,
                (
                    (spec.univariate_ids[0], spec.univariate_ids[1]),
                    (spec.univariate_ids[0], spec.univariate_ids[2]),
                    (spec.univariate_ids[1], spec.univariate_ids[2]),
                ),
            )
        ]
        i_three = observed_interaction(ledger, spec)
        residual = l_multi - sum(l_uni) - sum(i_pairs) - i_three
        worst = max(worst, abs(residual))
    elapsed = time.perf_counter() - started

    assert worst <= 1e-12
    assert elapsed < 1.0


def _synthetic_pair(rng, tag, n, w1, w2, interaction=0.0):
    """Bernoulli records for one composite + its two constituents."""
    ids = (f"{tag}-comp", f"{tag}-a", f"{tag}-b")
    probs = (sigmoid(w1 + w2 + interaction), sigmoid(w1), sigmoid(w2))
    records = []
    for cid, p in zip(ids, probs):
        draws = rng.random(n) < p
        records.extend(
            UtteranceRecord(
                condition_id=cid,
                sample_index=i,
                template_id="t",
                transcript_id="tr",
                female_prob=float(v),
            )
            for i, v in enumerate(draws)
        )
    spec = InteractionSpec(
        order="pairwise", composite_id=ids[0], univariate_ids=ids[1:]
    )
    return records, spec


def test_criterion_05_permutation_calibration_and_power():
    started = time.perf_counter()
    rng = np.random.default_rng(2025)
    records = []
    specs = []
    for i in range(200):
        w1, w2 = rng.uniform(-0.5, 0.5, size=2)
        rows, spec = _synthetic_pair(rng, f"null{i:03d}", 100, w1, w2)
        records.extend(rows)
        specs.append(spec)
    power_rows, power_spec = _synthetic_pair(rng, "power", 100, 0.1, -0.2, 3.0)
    records.extend(power_rows)
    ledger = ingest(records)

    p_values = [permutation_test(ledger, s, iterations=10_000, seed=0) for s in specs]
    rejection_rate = sum(p < 0.05 for p in p_values) / len(p_values)
    power_p = permutation_test(ledger, power_spec, iterations=10_000, seed=0)
    elapsed = time.perf_counter() - started

    assert rejection_rate <= 0.10
    assert power_p < 0.01
    assert elapsed < 600.0


def test_criterion_06_continuity_clamp():
    started = time.perf_counter()
    records = [
        UtteranceRecord(
            condition_id="all-female",
            sample_index=i,
            template_id="t",
            transcript_id="tr",
            female_prob=1.0,
        )
        for i in range(100)
    ]
    stats = condition_stats(ingest(records), "all-female")
    assert stats.p_hat == 1.0  # the reported probability stays uncorrected
    assert abs(stats.logit - LN_199) <= 1e-12
    assert stats.logit == math.log(199)

    for p in (0.00, 0.03, 0.5, 0.97, 1.00):
        forward = corrected_logit(p, 100)
        backward = corrected_logit(1.0 - p, 100)
        assert abs(forward + backward) <= 1e-12
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0


def test_criterion_07_bucket_fixtures():
    assert classify_bucket(7.81, 0.009) is Bucket.DARK
    assert classify_bucket(-7.68, 0.009) is Bucket.DARK
    assert classify_bucket(0.3, 0.5) is Bucket.LIGHT


def test_criterion_08_encoder_bias_properties():
    started = time.perf_counter()
    trait = [EmbeddingRecord("trait", (0.3, 1.2, -0.7))]
    female = [EmbeddingRecord("f1", (1.0, 0.2, 0.0)), EmbeddingRecord("f2", (0.8, -0.1, 0.3))]
    male = [EmbeddingRecord("m1", (-0.9, 0.1, 0.2)), EmbeddingRecord("m2", (-0.7, 0.4, -0.2))]
    base = delta(trait, female, male)

    def scaled(recs, s):
        return [
            EmbeddingRecord(r.key, tuple(x * s for x in r.vector)) for r in recs
        ]

    rescaled = delta(scaled(trait, 7.3), scaled(female, 0.04), scaled(male, 250.0))
    assert rescaled == pytest.approx(base, abs=1e-12)

    assert delta(trait, male, female) == -base  # anchor swap negates exactly

    deltas = [0.05, 0.12, 0.40, 0.20]
    summary = axis_effect_size("synthetic-axis", deltas)
    mirrored = axis_effect_size("synthetic-axis", [-x for x in deltas])
    assert summary.cohens_d > 0
    assert mirrored.cohens_d == -summary.cohens_d
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0


def test_criterion_09_end_to_end_determinism(tmp_path):
    emb = _toy_embeddings(tmp_path)
    write_oracle(tmp_path, VETO_ORACLE)
    manifest_path = write_manifest(
        tmp_path,
        "oracle: oracle.yaml\n"
        "iterations: 1000\n"
        f"embeddings: [{emb}]\n",
    )
    run_dirs = (tmp_path / "run1", tmp_path / "run2")
    for run_dir in run_dirs:
        run_all(load_manifest(manifest_path, output_dir=run_dir))

    first, second = (
        sorted(p.relative_to(d) for p in d.rglob("*") if p.is_file())
        for d in run_dirs
    )
    assert first == second and len(first) > 0
    for rel in first:
        assert (run_dirs[0] / rel).read_bytes() == (run_dirs[1] / rel).read_bytes(), rel
