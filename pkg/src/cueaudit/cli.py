"""Command-line entry points.

Subcommands mirror the pipeline stages: ``enumerate`` and ``simulate``
materialize job and ledger files, ``stage1``/``stage2``/``encoder`` run the
individual reports, ``all`` runs the full audit, and ``validate`` checks
externally produced wire-format files against the schemas. Successful runs
print a JSON object naming what was written; failures print a JSON error
envelope to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .encoderbias import read_embeddings
from .errors import AuditError, IncompleteLedger
from .ledger import ingest
from .manifest import load_manifest
from .reports import (
    run_all,
    run_encoder_report,
    run_enumerate,
    run_simulate,
    run_stage1,
    run_stage2,
)
from .wire import read_job_lines, read_ledger


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--manifest", required=True, help="audit manifest YAML")
    parser.add_argument("--seed", type=int, default=None, help="override manifest seed")
    parser.add_argument(
        "--iterations", type=int, default=None, help="override permutation iterations"
    )
    parser.add_argument(
        "--output-dir", default=None, help="override manifest output directory"
    )
    parser.add_argument(
        "--no-figures",
        action="store_true",
        help="skip PNG rendering (figures are on by default)",
    )


def _manifest_from(args: argparse.Namespace):
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.iterations is not None:
        overrides["iterations"] = args.iterations
    if args.output_dir is not None:
        overrides["output_dir"] = Path(args.output_dir)
    if args.no_figures:
        overrides["figures"] = False
    return load_manifest(args.manifest, **overrides)


def _emit(command: str, written) -> int:
    def flatten(value):
        if isinstance(value, dict):
            return {k: flatten(v) for k, v in value.items()}
        return str(value)

    print(json.dumps({"command": command, "written": flatten(written)}, indent=2))
    return 0


def _cmd_enumerate(args) -> int:
    return _emit("enumerate", run_enumerate(_manifest_from(args)))


def _cmd_simulate(args) -> int:
    return _emit("simulate", run_simulate(_manifest_from(args)))


def _cmd_stage1(args) -> int:
    return _emit("stage1", run_stage1(_manifest_from(args)).paths)


def _cmd_stage2(args) -> int:
    return _emit("stage2", run_stage2(_manifest_from(args)).paths)


def _cmd_encoder(args) -> int:
    return _emit("encoder", run_encoder_report(_manifest_from(args)).paths)


def _cmd_all(args) -> int:
    return _emit("all", run_all(_manifest_from(args)))


def _cmd_validate(args) -> int:
    checked: dict[str, dict] = {}
    for path in args.jobs or []:
        rows = list(read_job_lines(path))
        checked[str(path)] = {
            "kind": "jobs",
            "records": len(rows),
            "conditions": len({r["condition_id"] for r in rows}),
        }
    for path in args.ledger or []:
        records = list(read_ledger(path))
        ledger = ingest(records)  # rejects duplicate (condition, sample) pairs
        checked[str(path)] = {
            "kind": "ledger",
            "records": len(records),
            "conditions": len(ledger.condition_ids),
        }
    for path in args.embeddings or []:
        emb = read_embeddings(path)
        checked[str(path)] = {
            "kind": "embeddings",
            "encoder": emb.encoder,
            "dimension": emb.dimension,
            "records": len(emb.records),
            "keys": len(emb.keys),
        }
    if not checked:
        raise AuditError("nothing to validate; pass --ledger/--jobs/--embeddings")
    print(json.dumps({"command": "validate", "ok": True, "checked": checked}, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cueaudit",
        description="Compositional gender-bias audit for instruction-driven TTS.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    specs = [
        ("enumerate", _cmd_enumerate, "write job manifests for the audit grids"),
        ("simulate", _cmd_simulate, "write jobs plus synthetic-oracle ledgers"),
        ("stage1", _cmd_stage1, "univariate descriptor report"),
        ("stage2", _cmd_stage2, "compositional interaction report"),
        ("encoder", _cmd_encoder, "encoder semantic-bias report"),
        ("all", _cmd_all, "run every stage the manifest supports"),
    ]
    for name, func, doc in specs:
        p = sub.add_parser(name, help=doc)
        _add_common(p)
        p.set_defaults(func=func)

    v = sub.add_parser("validate", help="schema-check wire-format files")
    v.add_argument("--ledger", action="append", help="ledger JSONL to check")
    v.add_argument("--jobs", action="append", help="job manifest JSONL to check")
    v.add_argument("--embeddings", action="append", help="embedding file to check")
    v.set_defaults(func=_cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AuditError, OSError, ValueError) as exc:
        envelope = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, IncompleteLedger) and exc.missing:
            envelope["missing"] = list(exc.missing)
        print(json.dumps(envelope), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
