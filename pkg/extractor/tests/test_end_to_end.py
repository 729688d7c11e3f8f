"""Extractor output fed to the clone detector through its CLI."""

import json
import shutil
import subprocess

import pytest

from extractor_support import fake_server_cmd, validate_trace
from trace_extractor.extract import ProjectConfig, extract_project


def run_detector(traces_dir, report_path, threshold=1):
    return subprocess.run(
        [
            "goalclone",
            "--traces", str(traces_dir),
            "--min-proof-size", str(threshold),
            "--format", "json",
            "--out", str(report_path),
            "--cache-dir", str(traces_dir / ".cache"),
        ],
        capture_output=True,
        text=True,
    )


def test_scripted_server_to_detector(project, tmp_path):
    root, goals = project
    out = tmp_path / "traces"
    result = extract_project(
        ProjectConfig(root=str(root)), str(out), server_cmd=fake_server_cmd(goals)
    )
    assert result.traces_written == 2
    report_path = tmp_path / "report.json"
    proc = run_detector(out, report_path)
    assert proc.returncode == 0, proc.stderr
    report = json.loads(report_path.read_text())
    assert len(report["pairs"]) >= 1
    pair = report["pairs"][0]
    assert {pair["left"]["theorem"], pair["right"]["theorem"]} == {
        "thm_one",
        "thm_two",
    }


REAL_FIXTURE = """\
Lemma dup_one : True /\\ True.
Proof.
split.
exact I.
exact I.
Qed.

Lemma dup_two : True /\\ True.
Proof.
split.
exact I.
exact I.
Qed.
"""


@pytest.mark.skipif(
    shutil.which("coq-lsp") is None, reason="no coq-lsp on PATH"
)
def test_criterion_10_real_toolchain(tmp_path):
    root = tmp_path / "proj"
    root.mkdir()
    (root / "pair.v").write_text(REAL_FIXTURE, encoding="utf-8")
    out = tmp_path / "traces"
    result = extract_project(ProjectConfig(root=str(root)), str(out))
    assert result.traces_written == 2, result.diagnostics
    for p in out.glob("*.trace.json"):
        validate_trace(json.loads(p.read_text()))
    report_path = tmp_path / "report.json"
    proc = run_detector(out, report_path)
    assert proc.returncode == 0, proc.stderr
    report = json.loads(report_path.read_text())
    assert len(report["pairs"]) >= 1
    print("PASS criterion 10: extractor traces yield >= 1 pair end to end")
