"""Compositional gender-bias audit toolkit for instruction-driven TTS."""

__version__ = "0.1.0"

from .axes import AXES, Axis, Descriptor, SemanticConfig, compose, univariate
from .config import AuditConfig, load_config
from .interactions import (
    Bucket,
    InteractionResult,
    InteractionSpec,
    Synergy,
    Tier,
    TierAssignment,
    classify_bucket,
    color_class,
    evaluate_interaction,
    observed_interaction,
    pairwise_interaction,
    permutation_test,
    spec_for_config,
    stratify,
    synergy_sign,
    triple_interaction,
)
from .encoderbias import (
    AxisBiasSummary,
    EmbeddingRecord,
    EmbeddingSet,
    axis_effect_size,
    cosine,
    delta,
    read_embeddings,
    standardized_scores,
    write_embeddings,
)
from .ledger import (
    ConditionStats,
    ContinuityPolicy,
    Ledger,
    UtteranceRecord,
    condition_stats,
    corrected_logit,
    ingest,
    stats_by_condition,
)
from .oracle import OracleSpec, sigmoid, simulate
from .promptspace import (
    CompositionalSeedSet,
    InstructionJob,
    Lexicon,
    PromptTemplate,
    Transcript,
    bi_configs,
    enumerate_bi,
    enumerate_tri,
    enumerate_univariate,
    realize,
    replicate_jobs,
    select_polar_descriptors,
    tri_configs,
)
from .manifest import AuditManifest, load_manifest, load_oracle
from .reports import (
    CellRow,
    CompositeRow,
    EncoderGroupRow,
    EncoderReport,
    EncoderWordRow,
    ParadigmCall,
    Stage1Report,
    Stage1Row,
    Stage2Report,
    SubgroupSummary,
    classify_paradigm,
    run_all,
    run_encoder_report,
    run_enumerate,
    run_simulate,
    run_stage1,
    run_stage2,
)
from .wire import (
    job_line,
    ledger_line,
    parse_ledger_row,
    read_job_lines,
    read_ledger,
    write_jobs,
    write_ledger,
)

__all__ = [name for name in dir() if not name.startswith("_")]
