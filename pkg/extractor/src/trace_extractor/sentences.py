"""Split Coq source into sentences with byte offsets.

A sentence ends at a '.' followed by whitespace or end of input; dots inside
qualified names (Nat.add), strings, and (* comments *) do not terminate.
Bullet runs (-, +, *) and the focus braces { } at the start of a sentence are
sentences of their own.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["Sentence", "split_sentences", "position_at"]


@dataclass(frozen=True, slots=True)
class Sentence:
    text: str
    start: int
    end: int


def split_sentences(source: str) -> list[Sentence]:
    out: list[Sentence] = []
    n = len(source)
    i = 0
    start: int | None = None
    comment_depth = 0
    in_string = False
    while i < n:
        c = source[i]
        if comment_depth:
            if source.startswith("(*", i):
                comment_depth += 1
                i += 2
            elif source.startswith("*)", i):
                comment_depth -= 1
                i += 2
            else:
                i += 1
            continue
        if in_string:
            if c == '"':
                if source.startswith('""', i):  # doubled quote escape
                    i += 2
                    continue
                in_string = False
            i += 1
            continue
        if source.startswith("(*", i):
            comment_depth = 1
            i += 2
            continue
        if c == '"':
            in_string = True
            i += 1
            continue
        if start is None:
            if c.isspace():
                i += 1
                continue
            if c in "{}":
                out.append(Sentence(c, i, i + 1))
                i += 1
                continue
            if c in "-+*":
                j = i
                while j < n and source[j] == c:
                    j += 1
                out.append(Sentence(source[i:j], i, j))
                i = j
                continue
            start = i
        if c == "." and (i + 1 == n or source[i + 1].isspace()):
            out.append(Sentence(source[start:i + 1], start, i + 1))
            start = None
        i += 1
    return out


def position_at(source: str, offset: int) -> tuple[int, int]:
    """Zero-based (line, character) of the given offset."""
    line = source.count("\n", 0, offset)
    bol = source.rfind("\n", 0, offset) + 1
    return line, offset - bol
