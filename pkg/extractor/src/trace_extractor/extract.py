"""Drive a Coq-LSP session over a project and emit trace files.

Each theorem becomes one `<stem>__<theorem>.trace.json` file in the output
directory, with the goal states read back after every proof sentence. The
emitted JSON is the detector's trace schema:

    {"file", "theorem", "coq_version",
     "initial_goals": [{"hypotheses": [{"names": [...], "type": str}],
                        "conclusion": str}],
     "steps": [{"tactic": str, "goals_after": [goal]}]}
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .lsp import LspClient, LspError, LspTimeout
from .sentences import position_at, split_sentences

__all__ = ["ProjectConfig", "ExtractResult", "extract", "extract_project"]

PRINTING_DIRECTIVE = "Set Printing All.\n"

_OPENER_RE = re.compile(
    r"^(?:Theorem|Lemma|Fact|Remark|Corollary|Proposition|Property|Example|"
    r"Instance|Goal)\b\s*([A-Za-z_][A-Za-z0-9_']*)?"
)
_CLOSERS = frozenset({"Qed", "Defined", "Admitted", "Abort", "Save"})


@dataclass(frozen=True)
class ProjectConfig:
    root: str
    path_mappings: tuple[tuple[str, str, str], ...] = ()
    coq_args: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        root = Path(self.root)
        if not root.is_dir():
            raise ValueError(f"project root is not a directory: {self.root}")
        for physical, logical, kind in self.path_mappings:
            if kind not in ("R", "Q"):
                raise ValueError(f"mapping kind must be R or Q, got {kind!r}")
            if not (root / physical).exists():
                raise ValueError(f"mapped path does not exist: {physical}")


@dataclass
class ExtractResult:
    traces_written: int = 0
    files_processed: int = 0
    files_total: int = 0
    diagnostics: list[str] = field(default_factory=list)


def extract(
    config: ProjectConfig,
    out_dir: str,
    server_cmd: Sequence[str] = ("coq-lsp",),
    sentence_timeout: float = 60.0,
) -> int:
    """Extract traces for every .v file under the project root; returns the
    number of trace files written."""
    return extract_project(config, out_dir, server_cmd, sentence_timeout).traces_written


def extract_project(
    config: ProjectConfig,
    out_dir: str,
    server_cmd: Sequence[str] = ("coq-lsp",),
    sentence_timeout: float = 60.0,
) -> ExtractResult:
    root = Path(config.root)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = ExtractResult()
    _ensure_coqproject(config, result.diagnostics)
    for vfile in sorted(root.rglob("*.v")):
        result.files_total += 1
        try:
            traces = _extract_file(
                vfile, config, server_cmd, sentence_timeout, result.diagnostics
            )
        except (LspError, OSError) as exc:
            result.diagnostics.append(f"{vfile.name}: skipped ({exc})")
            continue
        result.files_processed += 1
        for trace in traces:
            path = out / f"{vfile.stem}__{trace['theorem']}.trace.json"
            _atomic_write(path, json.dumps(trace, indent=2) + "\n")
            result.traces_written += 1
    return result


def _ensure_coqproject(config: ProjectConfig, diagnostics: list[str]) -> None:
    # coq-lsp reads path mappings from _CoqProject; materialize ours there,
    # but never clobber an existing one
    if not config.path_mappings:
        return
    path = Path(config.root) / "_CoqProject"
    if path.exists():
        diagnostics.append("_CoqProject exists; -R/-Q mappings not applied")
        return
    lines = [f"-{kind} {physical} {logical}" for physical, logical, kind in config.path_mappings]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _extract_file(
    vfile: Path,
    config: ProjectConfig,
    server_cmd: Sequence[str],
    sentence_timeout: float,
    diagnostics: list[str],
) -> list[dict]:
    doc = PRINTING_DIRECTIVE + vfile.read_text(encoding="utf-8")
    sentences = split_sentences(doc)
    client = LspClient(tuple(server_cmd) + tuple(config.coq_args), cwd=config.root)
    try:
        init = client.request(
            "initialize",
            {
                "processId": os.getpid(),
                "rootUri": Path(config.root).absolute().as_uri(),
                "capabilities": {},
            },
            timeout=sentence_timeout,
        )
        version = ((init or {}).get("serverInfo") or {}).get("version", "unknown")
        client.notify("initialized", {})
        uri = vfile.absolute().as_uri()
        client.notify(
            "textDocument/didOpen",
            {
                "textDocument": {
                    "uri": uri,
                    "languageId": "coq",
                    "version": 1,
                    "text": doc,
                }
            },
        )
        return _replay(
            client, uri, vfile.name, version, doc, sentences, sentence_timeout,
            diagnostics,
        )
    finally:
        client.close()


def _replay(
    client: LspClient,
    uri: str,
    file_name: str,
    version: str,
    doc: str,
    sentences,
    sentence_timeout: float,
    diagnostics: list[str],
) -> list[dict]:
    traces: list[dict] = []
    current: dict | None = None
    anon = 0

    def finalize() -> None:
        nonlocal current
        if current is not None:
            traces.append(current)
            current = None

    for sentence in sentences:
        text = sentence.text.strip()
        if current is not None and text.rstrip(".") in _CLOSERS:
            finalize()
            continue
        line, character = position_at(doc, sentence.end)
        try:
            goals = _query_goals(client, uri, line, character, sentence_timeout)
        except LspTimeout as exc:
            # truncate the open proof rather than dropping it, then give up
            # on the rest of the file: the server is likely wedged
            diagnostics.append(f"{file_name}: truncated at line {line} ({exc})")
            finalize()
            break
        if current is None:
            if goals:
                match = _OPENER_RE.match(text)
                name = match.group(1) if match and match.group(1) else None
                if name is None:
                    name = f"anon_{anon}"
                    anon += 1
                current = {
                    "file": file_name,
                    "theorem": name,
                    "coq_version": version,
                    "initial_goals": goals,
                    "steps": [],
                }
        else:
            current["steps"].append({"tactic": text, "goals_after": goals})
    finalize()
    return traces


def _query_goals(
    client: LspClient, uri: str, line: int, character: int, timeout: float
) -> list[dict]:
    result = client.request(
        "proof/goals",
        {
            "textDocument": {"uri": uri},
            "position": {"line": line, "character": character},
            "pp_format": "Str",
        },
        timeout=timeout,
    )
    return _convert_goals(result)


def _convert_goals(result) -> list[dict]:
    if not result:
        return []
    goal_config = result.get("goals") or {}
    items = list(goal_config.get("goals") or [])
    for entry in goal_config.get("stack") or []:
        before, after = entry
        items.extend(before)
        items.extend(after)
    out = []
    for g in items:
        hyps = [
            {
                "names": [str(n) for n in (h.get("names") or [])],
                "type": _pp_text(h.get("ty")),
            }
            for h in (g.get("hyps") or [])
        ]
        out.append({"hypotheses": hyps, "conclusion": _pp_text(g.get("ty"))})
    return out


def _pp_text(value) -> str:
    # pp_format Str gives plain strings; tolerate structured Pp trees too
    if isinstance(value, str):
        return value
    if isinstance(value, list):
        return "".join(_pp_text(v) for v in value)
    if isinstance(value, dict):
        return "".join(_pp_text(v) for k, v in value.items() if k != "tag")
    if value is None:
        return ""
    return str(value)


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
