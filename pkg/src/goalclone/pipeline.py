"""End-to-end clone detection: trace ingestion, flatten/dedupe/pair, caching,
report rendering."""

from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .binding import alpha_eq, prod_body
from .generalize import CycleError, generalize
from .proof_tree import (
    EmptyTraceError,
    TheoremTrace,
    TraceStep,
    build_tree,
    get_nodes,
    get_proof,
    make_goal_state,
)
from .terms import ParseError, Term, parse_term, print_term

__all__ = [
    "GoalRecord",
    "ClonePair",
    "Report",
    "RunOptions",
    "RunResult",
    "MissingDirError",
    "load_traces",
    "flatten",
    "flatten_trace",
    "dedupe",
    "find_clones",
    "build_report",
    "render_json",
    "render_text",
    "run",
]

TRACE_SUFFIX = ".trace.json"


class MissingDirError(Exception):
    """The trace directory does not exist."""


@dataclass(frozen=True)
class GoalRecord:
    goal: Term
    generalized: Term
    proof: tuple[str, ...]
    file: str
    theorem: str

    @property
    def generalized_text(self) -> str:
        return print_term(self.generalized)

    def to_json(self) -> dict:
        return {
            "goal": print_term(self.goal),
            "generalized": self.generalized_text,
            "proof": list(self.proof),
            "file": self.file,
            "theorem": self.theorem,
        }


@dataclass(frozen=True)
class ClonePair:
    left: GoalRecord
    right: GoalRecord

    def sort_key(self) -> tuple:
        return (
            self.left.file,
            self.left.theorem,
            self.right.file,
            self.right.theorem,
            self.left.generalized_text,
        )


@dataclass
class Report:
    project: str
    threshold: int
    pairs: list[ClonePair]
    diagnostics: list[str]
    stats: dict[str, int]


# ---------------------------------------------------------------------------
# Trace loading

def _parse_goal_obj(obj: dict) -> tuple[tuple[str, str], ...]:
    # Multi-name hypothesis entries expand to one hypothesis per name.
    hyps: list[tuple[str, str]] = []
    for entry in obj["hypotheses"]:
        names = entry["names"]
        ty = entry["type"]
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            raise ValueError("hypothesis names must be a list of strings")
        if not isinstance(ty, str):
            raise ValueError("hypothesis type must be a string")
        hyps.extend((n, ty) for n in names)
    return tuple(hyps)


def parse_trace_json(obj: dict, source: str) -> TheoremTrace:
    """Validate one trace JSON object; raises ValueError/KeyError on schema
    violations."""
    if not isinstance(obj, dict):
        raise ValueError("trace must be a JSON object")
    file = obj["file"]
    theorem = obj["theorem"]
    if not isinstance(file, str) or not isinstance(theorem, str):
        raise ValueError("'file' and 'theorem' must be strings")
    if not isinstance(obj.get("coq_version", ""), str):
        raise ValueError("'coq_version' must be a string")

    def goals(raw) -> tuple:
        if not isinstance(raw, list):
            raise ValueError("goal list expected")
        out = []
        for g in raw:
            concl = g["conclusion"]
            if not isinstance(concl, str):
                raise ValueError("conclusion must be a string")
            out.append(make_goal_state(_parse_goal_obj(g), concl))
        return tuple(out)

    steps = []
    raw_steps = obj["steps"]
    if not isinstance(raw_steps, list):
        raise ValueError("'steps' must be a list")
    for s in raw_steps:
        tactic = s["tactic"]
        if not isinstance(tactic, str) or not tactic:
            raise ValueError("tactic must be a non-empty string")
        steps.append(TraceStep(tactic, goals(s["goals_after"])))
    return TheoremTrace(file, theorem, goals(obj["initial_goals"]), tuple(steps))


def load_traces(
    traces_dir: str | Path, diagnostics: list[str] | None = None
) -> list[TheoremTrace]:
    """Load all schema-valid `*.trace.json` files in lexicographic order;
    malformed files are skipped with a diagnostic."""
    diags = diagnostics if diagnostics is not None else []
    d = Path(traces_dir)
    if not d.is_dir():
        raise MissingDirError(f"trace directory not found: {d}")
    traces = []
    for path in sorted(d.glob(f"*{TRACE_SUFFIX}")):
        try:
            obj = json.loads(path.read_text(encoding="utf-8"))
            traces.append(parse_trace_json(obj, str(path)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            diags.append(f"{path.name}: skipped malformed trace ({exc})")
    return traces


# ---------------------------------------------------------------------------
# Flatten / dedupe / pair

def flatten_trace(
    trace: TheoremTrace, diagnostics: list[str] | None = None
) -> list[GoalRecord]:
    """Build the proof tree for one trace and emit one record per node."""
    diags = diagnostics if diagnostics is not None else []
    where = f"{trace.file}:{trace.theorem}"
    try:
        tree = build_tree(trace)
    except EmptyTraceError as exc:
        diags.append(f"{where}: skipped ({exc})")
        return []
    diags.extend(tree.diagnostics)
    records = []
    for node in get_nodes(tree):
        goal = node.goal
        if not goal.parsed:
            diags.append(
                f"{where}: node {node.id} skipped, unparseable goal "
                f"({goal.parse_error})"
            )
            continue
        try:
            gen = generalize(goal.context, goal.conclusion)
        except CycleError as exc:
            diags.append(f"{where}: node {node.id} skipped ({exc})")
            continue
        records.append(
            GoalRecord(
                goal=goal.conclusion,
                generalized=gen,
                proof=tuple(get_proof(tree, node.id)),
                file=trace.file,
                theorem=trace.theorem,
            )
        )
    return records


def flatten(
    traces: list[TheoremTrace], diagnostics: list[str] | None = None
) -> list[GoalRecord]:
    """Records for all traces, ordered by (file, theorem, node creation)."""
    records = []
    for trace in sorted(traces, key=lambda t: (t.file, t.theorem)):
        records.extend(flatten_trace(trace, diagnostics))
    return records


def dedupe(records: list[GoalRecord]) -> list[GoalRecord]:
    """Drop records whose generalized term is a strict quantifier-body suffix
    of another record's generalized term; removal is keyed by the generalized
    term, so all records sharing a redundant generalization disappear."""
    redundant: set[str] = set()
    for i, ri in enumerate(records):
        for j, rj in enumerate(records):
            if i != j and prod_body(ri.generalized, rj.generalized):
                redundant.add(rj.generalized_text)
    return [r for r in records if r.generalized_text not in redundant]


def find_clones(
    records: list[GoalRecord],
    threshold: int,
    skip_same_theorem: bool = False,
) -> list[ClonePair]:
    """All (i, j), i < j, with alpha-equivalent generalized goals and both
    proofs at least `threshold` tactic lines, sorted for reporting."""
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    eligible = [r for r in records if len(r.proof) >= threshold]
    pairs = []
    for i, ri in enumerate(eligible):
        for rj in eligible[i + 1:]:
            if skip_same_theorem and (ri.file, ri.theorem) == (rj.file, rj.theorem):
                continue
            if alpha_eq(ri.generalized, rj.generalized):
                pairs.append(ClonePair(ri, rj))
    pairs.sort(key=ClonePair.sort_key)
    return pairs


# ---------------------------------------------------------------------------
# Caching

def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _cache_path(cache_dir: Path, trace_path: Path) -> Path:
    stem = trace_path.name[: -len(TRACE_SUFFIX)]
    return cache_dir / f"{stem}.cache.json"


def _records_to_cache(records: list[GoalRecord]) -> list[dict]:
    return [r.to_json() for r in records]


def _records_from_cache(items: list[dict]) -> list[GoalRecord]:
    return [
        GoalRecord(
            goal=parse_term(it["goal"]),
            generalized=parse_term(it["generalized"]),
            proof=tuple(it["proof"]),
            file=it["file"],
            theorem=it["theorem"],
        )
        for it in items
    ]


def _atomic_write(path: Path, data: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# Report rendering

def build_report(
    project: str,
    threshold: int,
    pairs: list[ClonePair],
    diagnostics: list[str],
    stats: dict[str, int],
) -> Report:
    return Report(project, threshold, pairs, diagnostics, stats)


def render_json(report: Report) -> str:
    obj = {
        "project": report.project,
        "threshold": report.threshold,
        "stats": report.stats,
        "pairs": [
            {"left": p.left.to_json(), "right": p.right.to_json()}
            for p in report.pairs
        ],
        "diagnostics": report.diagnostics,
    }
    return json.dumps(obj, indent=2) + "\n"


def render_text(report: Report) -> str:
    lines = [
        f"project: {report.project}",
        f"min proof size: {report.threshold}",
        f"clone pairs: {len(report.pairs)}",
    ]
    for k, pair in enumerate(report.pairs, start=1):
        lines.append("")
        lines.append(f"=== clone pair {k} ===")
        lines.append(f"Goal: {pair.left.generalized_text}")
        for side, rec in (("Left", pair.left), ("Right", pair.right)):
            lines.append(f"{side}: {rec.file} :: {rec.theorem}")
            lines.append(f"  goal: {print_term(rec.goal)}")
            lines.append("  proof:")
            lines.extend(f"    {tac}" for tac in rec.proof)
    if report.diagnostics:
        lines.append("")
        lines.append("diagnostics:")
        lines.extend(f"  {d}" for d in report.diagnostics)
    lines.append("")
    lines.append(
        "stats: "
        + " ".join(f"{k}={v}" for k, v in sorted(report.stats.items()))
    )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Driver

@dataclass
class RunOptions:
    traces_dir: str
    min_proof_size: int = 5
    format: str = "text"  # "text" | "json"
    out: str | None = None  # None -> stdout
    cache_dir: str = ".clone-cache"
    skip_same_theorem: bool = False


@dataclass
class RunResult:
    exit_code: int
    report_text: str = ""
    stats: dict[str, int] = field(default_factory=dict)
    cache_hits: int = 0
    cache_misses: int = 0


def run(opts: RunOptions, stderr=None) -> RunResult:
    """Full pipeline: load -> flatten (cached per trace file) -> dedupe ->
    find_clones -> render report. The report is byte-identical across cache
    states; cache-hit counts go to the diagnostic stream only."""
    err = stderr if stderr is not None else sys.stderr
    traces_dir = Path(opts.traces_dir)
    if not traces_dir.is_dir():
        print(f"error: trace directory not found: {traces_dir}", file=err)
        return RunResult(exit_code=1)

    cache_dir = Path(opts.cache_dir)
    diagnostics: list[str] = []
    records: list[tuple[tuple, GoalRecord]] = []
    n_theorems = 0
    hits = misses = 0
    trace_files = sorted(traces_dir.glob(f"*{TRACE_SUFFIX}"))
    for path in trace_files:
        data = path.read_bytes()
        digest = _sha256(data)
        cpath = _cache_path(cache_dir, path)
        entry = None
        if cpath.is_file():
            try:
                cached = json.loads(cpath.read_text(encoding="utf-8"))
                if cached.get("source_sha256") == digest:
                    entry = cached
            except (json.JSONDecodeError, ValueError):
                entry = None  # stale or corrupt cache entry: rebuild
        if entry is not None:
            hits += 1
            trace_diags = list(entry["diagnostics"])
            trace_records = _records_from_cache(entry["records"])
            n_theorems += int(entry["theorems"])
        else:
            misses += 1
            trace_diags = []
            try:
                obj = json.loads(data.decode("utf-8"))
                trace = parse_trace_json(obj, str(path))
            except (
                UnicodeDecodeError,
                json.JSONDecodeError,
                KeyError,
                TypeError,
                ValueError,
            ) as exc:
                trace = None
                trace_diags.append(f"{path.name}: skipped malformed trace ({exc})")
            if trace is None:
                trace_records = []
                theorems_here = 0
            else:
                trace_records = flatten_trace(trace, trace_diags)
                theorems_here = 1
            n_theorems += theorems_here
            _atomic_write(
                cpath,
                json.dumps(
                    {
                        "source_sha256": digest,
                        "theorems": theorems_here,
                        "diagnostics": trace_diags,
                        "records": _records_to_cache(trace_records),
                    },
                    indent=2,
                ),
            )
        diagnostics.extend(trace_diags)
        for rec in trace_records:
            records.append(((rec.file, rec.theorem), rec))

    records.sort(key=lambda item: item[0])
    flat = [rec for _, rec in records]
    deduped = dedupe(flat)
    try:
        pairs = find_clones(
            deduped, opts.min_proof_size, skip_same_theorem=opts.skip_same_theorem
        )
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return RunResult(exit_code=1)

    stats = {
        "files": len(trace_files),
        "theorems": n_theorems,
        "goals": len(flat),
        "deduped_goals": len(deduped),
        "pairs": len(pairs),
    }
    report = build_report(
        project=traces_dir.resolve().name,
        threshold=opts.min_proof_size,
        pairs=pairs,
        diagnostics=diagnostics,
        stats=stats,
    )
    text = render_json(report) if opts.format == "json" else render_text(report)

    if opts.out is None:
        sys.stdout.write(text)
    else:
        try:
            _atomic_write(Path(opts.out), text)
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=err)
            return RunResult(exit_code=1)
    print(
        f"cache: {hits} hit(s), {misses} miss(es) over {len(trace_files)} trace file(s)",
        file=err,
    )
    return RunResult(
        exit_code=0,
        report_text=text,
        stats=stats,
        cache_hits=hits,
        cache_misses=misses,
    )
