"""Run manifests: one YAML file that pins an entire audit.

A manifest names the configuration sources, where probabilities come from
(either a synthetic oracle file or pre-recorded ledger files), any
embedding files to score, the random seed, the permutation iteration
count, and the output directory. Relative paths resolve against the
manifest's own directory so a manifest and its inputs can be moved as a
unit. The manifest file's content hash is embedded in every summary
output, which is what makes reruns comparable.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import yaml

from .errors import MalformedConfig
from .oracle import OracleSpec

MANIFEST_FORMAT = "cueaudit-manifest"
MANIFEST_VERSION = 1

ORACLE_FORMAT = "cueaudit-oracle"
ORACLE_VERSION = 1


@dataclass(frozen=True)
class AuditManifest:
    """A fully resolved audit description.

    ``lexicon``/``templates``/``transcripts``/``anchors`` are either the
    literal string ``"default"`` or absolute paths to config YAML. Exactly
    one probability source drives stages 1-2: ``oracle_path`` (synthetic)
    or the ``ledger_*`` paths (recorded runs).
    """

    lexicon: Union[str, Path] = "default"
    templates: Optional[Union[str, Path]] = None
    transcripts: Optional[Union[str, Path]] = None
    anchors: Optional[Union[str, Path]] = None
    oracle_path: Optional[Path] = None
    ledger_stage1: Optional[Path] = None
    ledger_bi: Optional[Path] = None
    ledger_tri: Optional[Path] = None
    embeddings: tuple[Path, ...] = ()
    seed: int = 0
    iterations: int = 10_000
    outcome: str = "mean"
    polar_k: int = 2
    output_dir: Path = Path("out")
    manifest_hash: str = ""
    figures: bool = True

    def __post_init__(self):
        if self.outcome not in ("mean", "threshold"):
            raise MalformedConfig(f"unknown outcome mode {self.outcome!r}")
        if self.iterations < 1000:
            raise MalformedConfig("iterations must be >= 1000")
        if self.polar_k < 1:
            raise MalformedConfig("polar_k must be >= 1")
        if self.oracle_path is not None and self.ledger_stage1 is not None:
            raise MalformedConfig(
                "manifest names both an oracle and recorded ledgers; pick one"
            )


def _resolve(base: Path, value) -> Path:
    p = Path(value)
    return p if p.is_absolute() else (base / p)


def _config_source(base: Path, value):
    if value is None or value == "default":
        return value
    return _resolve(base, value)


def load_manifest(path: Union[str, Path], **overrides) -> AuditManifest:
    """Read a manifest file; keyword overrides replace the file's values.

    Overrides accept the same names as :class:`AuditManifest` fields and
    are applied after path resolution, so an override path should already
    be absolute or relative to the caller's working directory.
    """
    path = Path(path)
    raw = path.read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    try:
        doc = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise MalformedConfig(f"{path}: not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedConfig(f"{path}: manifest must be a mapping")
    if doc.get("format") != MANIFEST_FORMAT:
        raise MalformedConfig(f"{path}: missing or wrong format tag")
    if doc.get("version") != MANIFEST_VERSION:
        raise MalformedConfig(f"{path}: unsupported version {doc.get('version')!r}")

    base = path.parent.resolve()
    config = doc.get("config") or {}
    if not isinstance(config, dict):
        raise MalformedConfig(f"{path}: 'config' must be a mapping")
    ledgers = doc.get("ledgers") or {}
    if not isinstance(ledgers, dict):
        raise MalformedConfig(f"{path}: 'ledgers' must be a mapping")
    embeddings = doc.get("embeddings") or []
    if not isinstance(embeddings, list):
        raise MalformedConfig(f"{path}: 'embeddings' must be a list")

    known = {
        "format", "version", "config", "oracle", "ledgers", "embeddings",
        "seed", "iterations", "outcome", "polar_k", "output_dir", "figures",
    }
    unknown = set(doc) - known
    if unknown:
        raise MalformedConfig(f"{path}: unknown manifest keys {sorted(unknown)}")

    fields = dict(
        lexicon=_config_source(base, config.get("lexicon", "default")) or "default",
        templates=_config_source(base, config.get("templates")),
        transcripts=_config_source(base, config.get("transcripts")),
        anchors=_config_source(base, config.get("anchors")),
        oracle_path=(
            _resolve(base, doc["oracle"]) if doc.get("oracle") else None
        ),
        ledger_stage1=(
            _resolve(base, ledgers["stage1"]) if ledgers.get("stage1") else None
        ),
        ledger_bi=_resolve(base, ledgers["bi"]) if ledgers.get("bi") else None,
        ledger_tri=_resolve(base, ledgers["tri"]) if ledgers.get("tri") else None,
        embeddings=tuple(_resolve(base, e) for e in embeddings),
        seed=int(doc.get("seed", 0)),
        iterations=int(doc.get("iterations", 10_000)),
        outcome=doc.get("outcome", "mean"),
        polar_k=int(doc.get("polar_k", 2)),
        output_dir=_resolve(base, doc.get("output_dir", "out")),
        manifest_hash=digest,
        figures=bool(doc.get("figures", True)),
    )
    fields.update(overrides)
    return AuditManifest(**fields)


def load_oracle(path: Union[str, Path]) -> OracleSpec:
    """Read a synthetic-oracle description.

    Layout::

        format: cueaudit-oracle
        version: 1
        base_logit: 0.0
        noise: deterministic        # or bernoulli
        seed: 0                     # bernoulli label stream
        weights: {car_nurse: 1.2, ...}
        interactions:
          - descriptors: [sta_high, car_nurse]
            weight: -1.0
    """
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise MalformedConfig(f"{path}: not valid YAML: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != ORACLE_FORMAT:
        raise MalformedConfig(f"{path}: missing or wrong format tag")
    if doc.get("version") != ORACLE_VERSION:
        raise MalformedConfig(f"{path}: unsupported version {doc.get('version')!r}")
    weights = doc.get("weights") or {}
    if not isinstance(weights, dict):
        raise MalformedConfig(f"{path}: 'weights' must be a mapping")
    interactions = {}
    for idx, item in enumerate(doc.get("interactions") or []):
        if (
            not isinstance(item, dict)
            or "descriptors" not in item
            or "weight" not in item
        ):
            raise MalformedConfig(
                f"{path}: interaction #{idx} needs 'descriptors' and 'weight'"
            )
        interactions[frozenset(item["descriptors"])] = float(item["weight"])
    return OracleSpec(
        base_logit=float(doc.get("base_logit", 0.0)),
        cue_weights={str(k): float(v) for k, v in weights.items()},
        injected_interactions=interactions,
        noise_mode=doc.get("noise", "deterministic"),
        rng_seed=int(doc.get("seed", 0)),
    )
