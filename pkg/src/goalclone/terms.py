"""Core Gallina-style term language: AST, parser, canonical printer.

The grammar covers the notation-free fragment that Rocq prints under
``Set Printing All``: sorts, variables, left-associative application,
forall/fun binders (with multi-binder sugar), let, single-argument fix,
and match-with-return clauses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

__all__ = [
    "Sort",
    "Var",
    "App",
    "Forall",
    "Fun",
    "Let",
    "Fix",
    "Clause",
    "Match",
    "Term",
    "ParseError",
    "parse_term",
    "print_term",
    "NAME_RE",
    "SORTS",
]

# Qualified names (dots), primes, existential metavariables (?x0) and
# explicit-application markers (@f) are all single opaque atoms.
NAME_RE = re.compile(r"[?@]?[A-Za-z_][A-Za-z0-9_'.]*")

SORTS = ("Set", "Prop", "Type")

KEYWORDS = frozenset(
    ["forall", "fun", "let", "fix", "match", "return", "with", "end", "in"]
    + list(SORTS)
)


@dataclass(frozen=True, slots=True)
class Sort:
    kind: str  # "Set" | "Prop" | "Type"


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class Forall:
    binder: str
    binder_type: "Term"
    body: "Term"


@dataclass(frozen=True, slots=True)
class Fun:
    binder: str
    binder_type: "Term"
    body: "Term"


@dataclass(frozen=True, slots=True)
class Let:
    binder: str
    binder_type: "Term"
    bound: "Term"
    body: "Term"


@dataclass(frozen=True, slots=True)
class Fix:
    fn_name: str
    binder: str
    binder_type: "Term"
    return_type: "Term"
    body: "Term"


@dataclass(frozen=True, slots=True)
class Clause:
    atoms: tuple[str, ...]  # constructor name followed by pattern variables
    body: "Term"


@dataclass(frozen=True, slots=True)
class Match:
    scrutinee: "Term"
    return_type: "Term"
    clauses: tuple[Clause, ...]


Term = Union[Sort, Var, App, Forall, Fun, Let, Fix, Match]


class ParseError(Exception):
    """Input outside the supported grammar.

    ``offset`` is a byte offset into the UTF-8 encoding of the input;
    ``expected`` names the token classes that would have been accepted.
    """

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<univ>@\{[^}]*\})
      | (?P<name>[?@]?[A-Za-z_][A-Za-z0-9_'.]*)
      | (?P<coloneq>:=)
      | (?P<darrow>=>)
      | (?P<punct>[(),:|])
    """,
    re.VERBOSE,
)


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind  # "name", "kw", "univ", or the literal punctuation
        self.text = text
        self.pos = pos  # character offset into the source


def _byte_offset(src: str, charpos: int) -> int:
    return len(src[:charpos].encode("utf-8", errors="replace"))


def _tokenize(src: str) -> list[_Token]:
    toks: list[_Token] = []
    i = 0
    n = len(src)
    while i < n:
        m = _TOKEN_RE.match(src, i)
        if m is None:
            raise ParseError(
                f"unexpected character {src[i]!r}", _byte_offset(src, i)
            )
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if kind == "name" and text in KEYWORDS:
                kind = "kw"
            elif kind in ("coloneq", "darrow", "punct"):
                kind = text
            toks.append(_Token(kind, text, i))
        i = m.end()
    toks.append(_Token("eof", "", n))
    return toks


# ---------------------------------------------------------------------------
# Parser

_MAX_DEPTH = 500


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.depth = 0

    def peek(self) -> _Token:
        return self.toks[self.i]

    def next(self) -> _Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, expected: tuple[str, ...]) -> "ParseError":
        tok = self.peek()
        got = tok.text if tok.kind != "eof" else "end of input"
        return ParseError(
            f"unexpected {got!r}, expected one of {sorted(set(expected))}",
            _byte_offset(self.src, tok.pos),
            expected,
        )

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.fail((kind,))
        return self.next()

    def expect_kw(self, word: str) -> None:
        tok = self.peek()
        if tok.kind != "kw" or tok.text != word:
            raise self.fail((word,))
        self.next()

    def expect_name(self) -> str:
        tok = self.peek()
        if tok.kind != "name":
            raise self.fail(("identifier",))
        return self.next().text

    def _enter(self) -> None:
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            raise ParseError(
                "nesting too deep", _byte_offset(self.src, self.peek().pos)
            )

    def term(self) -> Term:
        self._enter()
        try:
            tok = self.peek()
            if tok.kind == "kw":
                if tok.text == "forall":
                    self.next()
                    binders = self.binder_groups()
                    self.expect(",")
                    body = self.term()
                    for name, ty in reversed(binders):
                        body = Forall(name, ty, body)
                    return body
                if tok.text == "fun":
                    self.next()
                    binders = self.binder_groups()
                    self.expect("=>")
                    body = self.term()
                    for name, ty in reversed(binders):
                        body = Fun(name, ty, body)
                    return body
                if tok.text == "let":
                    self.next()
                    name = self.expect_name()
                    self.expect(":")
                    ty = self.term()
                    self.expect(":=")
                    bound = self.term()
                    self.expect_kw("in")
                    body = self.term()
                    return Let(name, ty, bound, body)
                if tok.text == "fix":
                    self.next()
                    fn_name = self.expect_name()
                    self.expect("(")
                    binder = self.expect_name()
                    self.expect(":")
                    binder_ty = self.term()
                    self.expect(")")
                    self.expect(":")
                    ret_ty = self.term()
                    self.expect(":=")
                    body = self.term()
                    return Fix(fn_name, binder, binder_ty, ret_ty, body)
            return self.app()
        finally:
            self.depth -= 1

    def binder_groups(self) -> list[tuple[str, Term]]:
        # `(x y : T) (z : U)` expands to [(x, T), (y, T), (z, U)]
        groups: list[tuple[str, Term]] = []
        self.expect("(")
        while True:
            names = [self.expect_name()]
            while self.peek().kind == "name":
                names.append(self.next().text)
            self.expect(":")
            ty = self.term()
            self.expect(")")
            groups.extend((name, ty) for name in names)
            if self.peek().kind != "(":
                break
            self.next()
        return groups

    def _at_atom(self) -> bool:
        tok = self.peek()
        if tok.kind in ("name", "("):
            return True
        return tok.kind == "kw" and (tok.text in SORTS or tok.text == "match")

    def app(self) -> Term:
        if not self._at_atom():
            raise self.fail(("term",))
        t = self.atom()
        while self._at_atom():
            t = App(t, self.atom())
        return t

    def atom(self) -> Term:
        self._enter()
        try:
            tok = self.peek()
            if tok.kind == "(":
                self.next()
                t = self.term()
                self.expect(")")
                return t
            if tok.kind == "name":
                return Var(self.next().text)
            if tok.kind == "kw" and tok.text in SORTS:
                self.next()
                if tok.text == "Type" and self.peek().kind == "univ":
                    self.next()  # universe annotation, discarded
                return Sort(tok.text)
            if tok.kind == "kw" and tok.text == "match":
                return self.match()
            raise self.fail(("term",))
        finally:
            self.depth -= 1

    def match(self) -> Term:
        self.expect_kw("match")
        scrutinee = self.term()
        self.expect_kw("return")
        ret_ty = self.term()
        self.expect_kw("with")
        clauses: list[Clause] = []
        while self.peek().kind == "|":
            self.next()
            atoms = [self.expect_name()]
            while self.peek().kind == "name":
                atoms.append(self.next().text)
            self.expect("=>")
            body = self.term()
            clauses.append(Clause(tuple(atoms), body))
        self.expect_kw("end")
        return Match(scrutinee, ret_ty, tuple(clauses))


def parse_term(src: str) -> Term:
    """Parse notation-free printed Gallina into a Term.

    Raises ParseError on any input outside the grammar.
    """
    p = _Parser(src)
    t = p.term()
    if p.peek().kind != "eof":
        raise p.fail(("end of input",))
    return t


# ---------------------------------------------------------------------------
# Canonical printer

def print_term(t: Term) -> str:
    """Fully parenthesized canonical text; parse_term(print_term(t)) == t."""
    if isinstance(t, Sort):
        return t.kind
    if isinstance(t, Var):
        return t.name
    if isinstance(t, App):
        return f"({print_term(t.fn)} {print_term(t.arg)})"
    if isinstance(t, Forall):
        return (
            f"(forall ({t.binder} : {print_term(t.binder_type)}), "
            f"{print_term(t.body)})"
        )
    if isinstance(t, Fun):
        return (
            f"(fun ({t.binder} : {print_term(t.binder_type)}) => "
            f"{print_term(t.body)})"
        )
    if isinstance(t, Let):
        return (
            f"(let {t.binder} : {print_term(t.binder_type)} := "
            f"{print_term(t.bound)} in {print_term(t.body)})"
        )
    if isinstance(t, Fix):
        return (
            f"(fix {t.fn_name} ({t.binder} : {print_term(t.binder_type)}) : "
            f"{print_term(t.return_type)} := {print_term(t.body)})"
        )
    if isinstance(t, Match):
        parts = [f"(match {print_term(t.scrutinee)} return {print_term(t.return_type)} with"]
        for clause in t.clauses:
            parts.append(f"| {' '.join(clause.atoms)} => {print_term(clause.body)}")
        parts.append("end)")
        return " ".join(parts)
    raise TypeError(f"not a Term: {t!r}")
