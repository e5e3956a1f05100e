"""Loading and validation of the audit configuration file.

The configuration is a YAML document with four sections: the descriptor
lexicon (counts declared and enforced), the realization templates, the
gender-neutral transcripts, and the gender anchor word sets. ``"default"``
resolves to the configuration shipped with the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Union

import yaml

from .axes import AXES, Axis, Descriptor
from .errors import ConfigCountMismatch, SchemaViolation
from .promptspace import Lexicon, PromptTemplate, Transcript

CONFIG_FORMAT = "cueaudit-config"
DEFAULT = "default"


@dataclass(frozen=True)
class AnchorSets:
    female: tuple[str, ...]
    male: tuple[str, ...]


@dataclass(frozen=True)
class AuditConfig:
    lexicon: Lexicon
    templates: tuple[PromptTemplate, ...]
    transcripts: tuple[Transcript, ...]
    anchors: AnchorSets


def _load_yaml(source: Union[str, Path]) -> dict:
    if str(source) == DEFAULT:
        text = (resources.files("cueaudit") / "data" / "default_config.yaml").read_text(
            encoding="utf-8"
        )
    else:
        text = Path(source).read_text(encoding="utf-8")
    doc = yaml.safe_load(text)
    if not isinstance(doc, dict):
        raise SchemaViolation(f"config {source}: top level must be a mapping")
    if doc.get("format") != CONFIG_FORMAT:
        raise SchemaViolation(
            f"config {source}: format must be {CONFIG_FORMAT!r}, got {doc.get('format')!r}"
        )
    if doc.get("version") != 1:
        raise SchemaViolation(f"config {source}: unsupported version {doc.get('version')!r}")
    return doc


def _parse_lexicon(section: dict) -> Lexicon:
    declared = section.get("counts", {})
    lists = section.get("descriptors", {})
    parsed: dict[str, tuple[Descriptor, ...]] = {}
    seen_ids: set[str] = set()
    for axis in AXES:
        entries = lists.get(axis.value, [])
        descriptors = []
        for entry in entries:
            d = Descriptor(
                id=str(entry["id"]),
                axis=axis,
                surface=str(entry["surface"]),
                subgroup=entry.get("subgroup"),
            )
            if d.id in seen_ids:
                raise SchemaViolation(f"duplicate descriptor id {d.id!r}")
            seen_ids.add(d.id)
            descriptors.append(d)
        want = declared.get(axis.value)
        if want is not None and want != len(descriptors):
            raise ConfigCountMismatch(
                f"lexicon declares {want} {axis.value} descriptors but lists "
                f"{len(descriptors)}"
            )
        parsed[axis.value] = tuple(descriptors)
    if len(parsed["status"]) != 2:
        raise ConfigCountMismatch(
            f"status axis must hold exactly 2 descriptors, got {len(parsed['status'])}"
        )
    return Lexicon(**parsed)


def _parse_templates(section: dict) -> tuple[PromptTemplate, ...]:
    items = section.get("items", [])
    want = section.get("count")
    if want is not None and want != len(items):
        raise ConfigCountMismatch(f"declared {want} templates but listed {len(items)}")
    templates = []
    for entry in items:
        fragments = {Axis(k): str(v) for k, v in entry.get("fragments", {}).items()}
        templates.append(
            PromptTemplate(id=str(entry["id"]), pattern=str(entry["pattern"]), fragments=fragments)
        )
    _check_unique_ids("template", [t.id for t in templates])
    return tuple(templates)


def _parse_transcripts(section: dict) -> tuple[Transcript, ...]:
    items = section.get("items", [])
    want = section.get("count")
    if want is not None and want != len(items):
        raise ConfigCountMismatch(f"declared {want} transcripts but listed {len(items)}")
    transcripts = tuple(Transcript(id=str(e["id"]), text=str(e["text"])) for e in items)
    _check_unique_ids("transcript", [t.id for t in transcripts])
    return transcripts


def _parse_anchors(section: dict) -> AnchorSets:
    female = tuple(str(w) for w in section.get("female", []))
    male = tuple(str(w) for w in section.get("male", []))
    return AnchorSets(female=female, male=male)


def _check_unique_ids(kind: str, ids: list[str]) -> None:
    dupes = {i for i in ids if ids.count(i) > 1}
    if dupes:
        raise SchemaViolation(f"duplicate {kind} ids: {sorted(dupes)}")


def load_config(
    lexicon: Union[str, Path] = DEFAULT,
    templates: Union[str, Path, None] = None,
    transcripts: Union[str, Path, None] = None,
    anchors: Union[str, Path, None] = None,
) -> AuditConfig:
    """Load an audit configuration.

    Each section may come from its own file; sections default to the
    lexicon's file, so a single bundled document is the common case.
    """
    docs: dict[str, dict] = {}

    def doc_for(source) -> dict:
        key = str(source)
        if key not in docs:
            docs[key] = _load_yaml(source)
        return docs[key]

    lex_doc = doc_for(lexicon)
    tpl_doc = doc_for(templates) if templates is not None else lex_doc
    trn_doc = doc_for(transcripts) if transcripts is not None else lex_doc
    anc_doc = doc_for(anchors) if anchors is not None else lex_doc

    for name, doc in (("lexicon", lex_doc), ("templates", tpl_doc),
                      ("transcripts", trn_doc), ("anchors", anc_doc)):
        if name not in doc:
            raise SchemaViolation(f"config is missing the {name!r} section")

    return AuditConfig(
        lexicon=_parse_lexicon(lex_doc["lexicon"]),
        templates=_parse_templates(tpl_doc["templates"]),
        transcripts=_parse_transcripts(trn_doc["transcripts"]),
        anchors=_parse_anchors(anc_doc["anchors"]),
    )
