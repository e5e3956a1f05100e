"""Line-delimited wire formats shared with external adapters.

Two JSONL contracts live here: the job manifest the core hands to a
synthesis adapter, and the utterance ledger the adapter hands back. Field
order within a line is fixed so that files diff and hash stably.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator, Union

from .ledger import UtteranceRecord
from .promptspace import InstructionJob
from .errors import SchemaViolation

LEDGER_FORMAT = "cueaudit-ledger"
LEDGER_VERSION = 1

JOB_FIELDS = (
    "condition_id",
    "instruction",
    "transcript_id",
    "template_id",
    "transcript",
    "sample_index",
)
LEDGER_FIELDS = (
    "version",
    "condition_id",
    "sample_index",
    "template_id",
    "transcript_id",
    "female_prob",
)


def _dump_line(pairs) -> str:
    return json.dumps(dict(pairs), ensure_ascii=False)


def job_line(job: InstructionJob) -> str:
    return _dump_line((f, getattr(job, f)) for f in JOB_FIELDS)


def write_jobs(jobs: Iterable[InstructionJob], path: Union[str, Path]) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", encoding="utf-8") as fh:
        for job in jobs:
            fh.write(job_line(job) + "\n")
            count += 1
    return count


def read_job_lines(path: Union[str, Path]) -> Iterator[dict]:
    """Raw manifest rows; the semantic configuration is not on the wire, so
    consumers key on ``condition_id``."""
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaViolation(f"{path}:{lineno}: not valid JSON: {exc}") from None
            missing = [f for f in JOB_FIELDS if f not in row]
            if missing:
                raise SchemaViolation(f"{path}:{lineno}: missing fields {missing}")
            yield row


def ledger_line(record: UtteranceRecord) -> str:
    values = {
        "version": LEDGER_VERSION,
        "condition_id": record.condition_id,
        "sample_index": record.sample_index,
        "template_id": record.template_id,
        "transcript_id": record.transcript_id,
        "female_prob": record.female_prob,
    }
    return _dump_line((f, values[f]) for f in LEDGER_FIELDS)


def write_ledger(records: Iterable[UtteranceRecord], path: Union[str, Path]) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(ledger_line(record) + "\n")
            count += 1
    return count


def _parse_female(value, where: str) -> float:
    if isinstance(value, str):
        label = value.strip().lower()
        if label == "female":
            return 1.0
        if label == "male":
            return 0.0
        raise SchemaViolation(f"{where}: unknown gender label {value!r}")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaViolation(f"{where}: female_prob must be a number or Female/Male")
    return float(value)


def parse_ledger_row(row: dict, where: str = "<record>") -> UtteranceRecord:
    if row.get("version") != LEDGER_VERSION:
        raise SchemaViolation(
            f"{where}: ledger version must be {LEDGER_VERSION}, got {row.get('version')!r}"
        )
    unknown = [k for k in row if k not in LEDGER_FIELDS]
    if unknown:
        raise SchemaViolation(f"{where}: unknown fields {unknown}")
    missing = [f for f in LEDGER_FIELDS if f not in row]
    if missing:
        raise SchemaViolation(f"{where}: missing fields {missing}")
    index = row["sample_index"]
    if isinstance(index, bool) or not isinstance(index, int) or index < 0:
        raise SchemaViolation(f"{where}: sample_index must be a non-negative integer")
    return UtteranceRecord(
        condition_id=str(row["condition_id"]),
        sample_index=index,
        template_id=str(row["template_id"]),
        transcript_id=str(row["transcript_id"]),
        female_prob=_parse_female(row["female_prob"], where),
    )


def read_ledger(path: Union[str, Path]) -> Iterator[UtteranceRecord]:
    """Parse a ledger file, validating every line against the schema."""
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            where = f"{path}:{lineno}"
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaViolation(f"{where}: not valid JSON: {exc}") from None
            if not isinstance(row, dict):
                raise SchemaViolation(f"{where}: each line must be a JSON object")
            yield parse_ledger_row(row, where)
