"""Command-line behavior: subcommands, overrides, validation, error envelopes."""

import json
import shutil
import subprocess

import pytest

from cueaudit import UtteranceRecord, write_ledger
from cueaudit.cli import main
from tests.conftest import write_manifest, write_oracle
from tests.test_reports import STAGE1_ORACLE, _toy_embeddings


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _oracle_manifest(tmp_path, extra=""):
    write_oracle(tmp_path, STAGE1_ORACLE)
    return write_manifest(
        tmp_path, "oracle: oracle.yaml\niterations: 1000\n" + extra
    )


class TestSubcommands:
    def test_enumerate_without_probability_source(self, tmp_path, capsys):
        manifest = write_manifest(tmp_path, "")
        code, out, err = run_cli(capsys, "enumerate", "--manifest", str(manifest))
        assert code == 0 and err == ""
        doc = json.loads(out)
        assert doc["command"] == "enumerate"
        assert set(doc["written"]) == {"jobs_stage1"}
        assert (tmp_path / "out" / "jobs_stage1.jsonl").exists()

    def test_simulate_writes_all_grids(self, tmp_path, capsys):
        manifest = _oracle_manifest(tmp_path)
        code, out, _ = run_cli(capsys, "simulate", "--manifest", str(manifest))
        assert code == 0
        written = json.loads(out)["written"]
        assert set(written) == {
            "jobs_stage1", "ledger_stage1", "jobs_bi", "ledger_bi",
            "jobs_tri", "ledger_tri",
        }

    def test_stage1_with_overrides(self, tmp_path, capsys):
        manifest = _oracle_manifest(tmp_path)
        override_dir = tmp_path / "elsewhere"
        code, out, _ = run_cli(
            capsys,
            "stage1",
            "--manifest", str(manifest),
            "--seed", "99",
            "--output-dir", str(override_dir),
            "--no-figures",
        )
        assert code == 0
        written = json.loads(out)["written"]
        assert "figure" not in written
        summary = json.loads(
            (override_dir / "stage1_summary.json").read_text(encoding="utf-8")
        )
        assert summary["provenance"]["seed"] == 99
        assert not (tmp_path / "out").exists()

    def test_all_runs_every_supported_section(self, tmp_path, capsys):
        emb = _toy_embeddings(tmp_path)
        manifest = _oracle_manifest(tmp_path, extra=f"embeddings: [{emb}]\n")
        code, out, _ = run_cli(
            capsys, "all", "--manifest", str(manifest), "--no-figures"
        )
        assert code == 0
        written = json.loads(out)["written"]
        assert set(written) == {"stage1", "stage2", "encoder"}
        out_dir = tmp_path / "out"
        for name in ("stage1.txt", "stage2.txt", "encoder.txt"):
            assert (out_dir / name).exists()
        assert not list(out_dir.glob("*.png"))


class TestValidate:
    def test_accepts_simulated_outputs(self, tmp_path, capsys):
        manifest = _oracle_manifest(tmp_path)
        run_cli(capsys, "simulate", "--manifest", str(manifest))
        out_dir = tmp_path / "out"
        code, out, _ = run_cli(
            capsys,
            "validate",
            "--jobs", str(out_dir / "jobs_stage1.jsonl"),
            "--ledger", str(out_dir / "ledger_stage1.jsonl"),
            "--ledger", str(out_dir / "ledger_bi.jsonl"),
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["ok"] is True
        jobs = doc["checked"][str(out_dir / "jobs_stage1.jsonl")]
        assert jobs == {"kind": "jobs", "records": 6900, "conditions": 69}
        ledger = doc["checked"][str(out_dir / "ledger_stage1.jsonl")]
        assert ledger == {"kind": "ledger", "records": 6900, "conditions": 69}
        bi = doc["checked"][str(out_dir / "ledger_bi.jsonl")]
        assert bi == {"kind": "ledger", "records": 3200, "conditions": 32}

    def test_accepts_embedding_files(self, tmp_path, capsys):
        emb = _toy_embeddings(tmp_path)
        code, out, _ = run_cli(capsys, "validate", "--embeddings", str(emb))
        assert code == 0
        checked = json.loads(out)["checked"][str(emb)]
        assert checked["kind"] == "embeddings"
        assert checked["encoder"] == "tiny"
        assert checked["dimension"] == 3
        assert checked["records"] == 10

    def test_rejects_out_of_range_probability(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text(
            json.dumps(
                {
                    "version": 1,
                    "condition_id": "c",
                    "sample_index": 0,
                    "template_id": "t",
                    "transcript_id": "tr",
                    "female_prob": 1.5,
                }
            )
            + "\n",
            encoding="utf-8",
        )
        code, out, err = run_cli(capsys, "validate", "--ledger", str(bad))
        assert code == 1 and out == ""
        envelope = json.loads(err)
        assert envelope["error"] == "SchemaViolation"
        assert "female_prob" in envelope["message"]

    def test_rejects_duplicate_samples(self, tmp_path, capsys):
        rec = UtteranceRecord(
            condition_id="c",
            sample_index=0,
            template_id="t",
            transcript_id="tr",
            female_prob=0.5,
        )
        dup = tmp_path / "dup.jsonl"
        write_ledger([rec, rec], dup)
        code, _, err = run_cli(capsys, "validate", "--ledger", str(dup))
        assert code == 1
        assert json.loads(err)["error"] == "DuplicateSample"

    def test_requires_at_least_one_target(self, capsys):
        code, _, err = run_cli(capsys, "validate")
        assert code == 1
        envelope = json.loads(err)
        assert envelope["error"] == "AuditError"
        assert "nothing to validate" in envelope["message"]


class TestErrorEnvelopes:
    def test_missing_manifest_file(self, tmp_path, capsys):
        code, out, err = run_cli(
            capsys, "stage1", "--manifest", str(tmp_path / "absent.yaml")
        )
        assert code == 1 and out == ""
        assert json.loads(err)["error"] == "FileNotFoundError"

    def test_incomplete_ledger_lists_missing_conditions(self, tmp_path, capsys):
        rec = UtteranceRecord(
            condition_id="not-a-real-condition",
            sample_index=0,
            template_id="t",
            transcript_id="tr",
            female_prob=0.5,
        )
        ledger = tmp_path / "sparse.jsonl"
        write_ledger([rec], ledger)
        manifest = write_manifest(tmp_path, f"ledgers: {{stage1: {ledger}}}\n")
        code, _, err = run_cli(capsys, "stage1", "--manifest", str(manifest))
        assert code == 1
        envelope = json.loads(err)
        assert envelope["error"] == "IncompleteLedger"
        assert len(envelope["missing"]) == 69

    def test_malformed_manifest(self, tmp_path, capsys):
        manifest = write_manifest(tmp_path, "surprise: 1\n")
        code, _, err = run_cli(capsys, "stage1", "--manifest", str(manifest))
        assert code == 1
        assert json.loads(err)["error"] == "MalformedConfig"

    def test_iteration_floor_applies_to_overrides(self, tmp_path, capsys):
        manifest = _oracle_manifest(tmp_path)
        code, _, err = run_cli(
            capsys, "stage2", "--manifest", str(manifest), "--iterations", "10"
        )
        assert code == 1
        assert json.loads(err)["error"] == "MalformedConfig"

    def test_usage_errors_exit_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["stage1"])  # --manifest is required
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main([])  # a subcommand is required
        assert exc.value.code == 2


@pytest.mark.skipif(shutil.which("cueaudit") is None, reason="entry point not installed")
def test_console_script_round_trip(tmp_path):
    manifest = _oracle_manifest(tmp_path)
    proc = subprocess.run(
        ["cueaudit", "enumerate", "--manifest", str(manifest)],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert doc["command"] == "enumerate"
    assert set(doc["written"]) == {"jobs_stage1", "jobs_bi", "jobs_tri"}
