#!/usr/bin/env python3
"""Generate the synthetic trace corpus used by the tests and demo runs.

The corpus contains 6 theorem traces (30 goals total) with planted clones:
an exact-duplicate pair, a bound-variable-renamed pair, a pair whose shared
generalization also strips to a nested goal that dedupe must remove, and a
pair whose proofs are below the default size threshold.
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

EXACT_GOAL = "and (step_star (init ?x) ?x0 ?x1) (In ?x2 (messages ?x1))"

EXACT_PROOF = [
    "split_all.",
    "eassumption.",
    "subv s1.",
    "apply in_app_iff.",
    "apply in_eq.",
]


def goal(conclusion: str, hyps: tuple[tuple[str, str], ...] = ()) -> dict:
    return {
        "hypotheses": [{"names": [n], "type": t} for n, t in hyps],
        "conclusion": conclusion,
    }


def chain_trace(file: str, theorem: str, root: dict, mids: list[dict],
                tactics: list[str]) -> dict:
    """Linear proof: root -> mids[0] -> ... -> mids[-1] -> solved.

    Needs len(tactics) == len(mids) + 1; yields len(tactics) goal records.
    """
    assert len(tactics) == len(mids) + 1
    steps = []
    for k, tac in enumerate(tactics):
        after = [mids[k]] if k < len(mids) else []
        steps.append({"tactic": tac, "goals_after": after})
    return {
        "file": file,
        "theorem": theorem,
        "coq_version": "8.16.0",
        "initial_goals": [root],
        "steps": steps,
    }


def junk(tag: str) -> dict:
    # Distinct free variable per slot so no accidental alpha-pairs arise.
    return goal(f"junk_{tag}")


def build_traces() -> list[dict]:
    tacs = lambda tag: [f"tac_{tag}_{k}." for k in range(5)]

    below = goal("below_mark zz")  # planted pair with proof size 2
    traces = [
        # Exact-duplicate pair: identical closed goals, 5-line proofs.
        chain_trace("theories/fileA.v", "thm_a", goal(EXACT_GOAL),
                    [junk("a1"), junk("a2"), below, junk("a3")], EXACT_PROOF),
        chain_trace("theories/fileB.v", "thm_b", goal(EXACT_GOAL),
                    [junk("b1"), junk("b2"), below, junk("b3")], EXACT_PROOF),
        # Renamed pair: alpha-equivalent after generalizing over the context.
        chain_trace("theories/fileA.v", "thm_c",
                    goal("P n", (("n", "nat"),)),
                    [junk("c1"), junk("c2"), junk("c3"), junk("c4")], tacs("c")),
        chain_trace("theories/fileB.v", "thm_d",
                    goal("P m", (("m", "nat"),)),
                    [junk("d1"), junk("d2"), junk("d3"), junk("d4")], tacs("d")),
        # Generalization-nesting: thm_f's second goal `Q x` (empty context)
        # is the stripped body of the e/f roots' generalization and must be
        # removed by dedupe; the e/f roots themselves pair up.
        chain_trace("theories/fileC.v", "thm_e",
                    goal("Q x", (("x", "T"),)),
                    [junk("e1"), junk("e2"), junk("e3"), junk("e4")], tacs("e")),
        chain_trace("theories/fileC.v", "thm_f",
                    goal("Q y", (("y", "T"),)),
                    [goal("Q x"), junk("f1"), junk("f2"), junk("f3")], tacs("f")),
    ]
    return traces


def write_corpus(outdir: str | Path) -> list[Path]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for trace in build_traces():
        stem = Path(trace["file"]).stem
        path = out / f"{stem}__{trace['theorem']}.trace.json"
        path.write_text(json.dumps(trace, indent=2) + "\n", encoding="utf-8")
        written.append(path)
    return written


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("outdir", help="directory to write *.trace.json files into")
    args = parser.parse_args()
    written = write_corpus(args.outdir)
    print(f"wrote {len(written)} trace files to {args.outdir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
