"""Grounded normal logic programs: data model, parser and printer."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

RESERVED_PREFIX = "chk_"
RESERVED_NAMES = frozenset({"nmr_check"})


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True, slots=True, order=True)
class Literal:
    atom: int
    positive: bool = True

    def complement(self) -> "Literal":
        return Literal(self.atom, not self.positive)


@dataclass(frozen=True, slots=True)
class Rule:
    id: int
    head: Optional[int]
    body: tuple[Literal, ...]

    @property
    def is_constraint(self) -> bool:
        return self.head is None


@dataclass(frozen=True, slots=True)
class Query:
    goals: tuple[Literal, ...]

    def __post_init__(self):
        if not self.goals:
            raise ValueError("query has no goals")


@dataclass(frozen=True)
class Program:
    """Interned atom table plus rules in source order.

    ``query`` holds the last ``?- ...`` directive found in the source, if any.
    """

    atoms: tuple[str, ...] = ()
    rules: tuple[Rule, ...] = ()
    query: Optional[Query] = None
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._index is None:
            object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.atoms)})

    def atom_id(self, name: str) -> int:
        return self._index[name]

    def get_atom(self, name: str) -> Optional[int]:
        return self._index.get(name)

    def name(self, atom: int) -> str:
        return self.atoms[atom]

    def rules_for(self, atom: int) -> list[Rule]:
        return [r for r in self.rules if r.head == atom]

    def literal_str(self, lit: Literal) -> str:
        name = self.atoms[lit.atom]
        return name if lit.positive else f"not {name}"

    def rule_str(self, rule: Rule) -> str:
        body = ", ".join(self.literal_str(l) for l in rule.body)
        if rule.head is None:
            return f":- {body}."
        head = self.atoms[rule.head]
        return f"{head} :- {body}." if body else f"{head}."

    def query_str(self, query: Query) -> str:
        return "?- " + ", ".join(self.literal_str(l) for l in query.goals) + "."

    def with_atoms(self, names: Iterable[str]) -> "Program":
        """Return a copy whose atom table also interns ``names``."""
        atoms = list(self.atoms)
        seen = set(atoms)
        for n in names:
            if n not in seen:
                seen.add(n)
                atoms.append(n)
        if len(atoms) == len(self.atoms):
            return self
        return Program(tuple(atoms), self.rules, self.query)

    def __str__(self) -> str:
        return render_program(self)


# -- lexer ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<if>:-)
  | (?P<query>\?-)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
  | (?P<dot>\.)
  | (?P<number>-?[0-9]+)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<quoted>"(?:[^"\\\n]|\\.)*")
    """,
    re.VERBOSE,
)


@dataclass(slots=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> Iterator[_Token]:
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            if kind == "var":
                raise ParseError(f"variables are not supported (grounded input only): {value}", line, col)
            yield _Token(kind, value, line, col)
        nl = value.count("\n")
        if nl:
            line += nl
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    yield _Token("eof", "", line, pos - line_start + 1)


class _Parser:
    def __init__(self, text: str, atoms: Optional[list[str]] = None):
        self.tokens = list(_tokenize(text))
        self.i = 0
        self.atoms: list[str] = list(atoms or [])
        self.index = {n: i for i, n in enumerate(self.atoms)}
        self.reserved_ok = False

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, what: str) -> _Token:
        t = self.tok
        if t.kind != kind:
            if t.kind == "eof":
                raise ParseError(f"unterminated statement: expected {what}", t.line, t.col)
            raise ParseError(f"expected {what}, found {t.text!r}", t.line, t.col)
        return self.advance()

    def intern(self, name: str, tok: _Token) -> int:
        if not self.reserved_ok and (name.startswith(RESERVED_PREFIX) or name in RESERVED_NAMES):
            raise ParseError(f"atom name {name!r} is reserved for generated checks", tok.line, tok.col)
        idx = self.index.get(name)
        if idx is None:
            idx = len(self.atoms)
            self.atoms.append(name)
            self.index[name] = idx
        return idx

    def term(self) -> str:
        t = self.tok
        if t.kind in ("number", "quoted"):
            self.advance()
            return t.text
        name = self.expect("ident", "a constant").text
        if self.tok.kind == "lparen":
            self.advance()
            args = [self.term()]
            while self.tok.kind == "comma":
                self.advance()
                args.append(self.term())
            self.expect("rparen", "')'")
            return f"{name}({','.join(args)})"
        return name

    def atom(self) -> tuple[str, _Token]:
        t = self.tok
        if t.kind != "ident":
            if t.kind == "eof":
                raise ParseError("unterminated statement: expected an atom", t.line, t.col)
            raise ParseError(f"expected an atom, found {t.text!r}", t.line, t.col)
        return self.term(), t

    def literal(self) -> Literal:
        t = self.tok
        if t.kind == "ident" and t.text == "not" and self.tokens[self.i + 1].kind == "ident":
            self.advance()
            name, at = self.atom()
            return Literal(self.intern(name, at), False)
        name, at = self.atom()
        return Literal(self.intern(name, at), True)

    def body(self) -> list[Literal]:
        lits = [self.literal()]
        while self.tok.kind == "comma":
            self.advance()
            lits.append(self.literal())
        return lits

    def statement(self, rules: list[Rule], queries: list[Query]) -> None:
        t = self.tok
        if t.kind == "if":
            self.advance()
            body = self.body()
            self.expect("dot", "'.'")
            rules.append(Rule(len(rules), None, tuple(body)))
            return
        if t.kind == "query":
            self.advance()
            goals = self.body()
            self.expect("dot", "'.'")
            queries.append(Query(tuple(goals)))
            return
        if t.kind == "ident" and t.text == "not" and self.tokens[self.i + 1].kind == "ident":
            raise ParseError("'not' is not allowed in a rule head", t.line, t.col)
        name, at = self.atom()
        head = self.intern(name, at)
        body: list[Literal] = []
        if self.tok.kind == "if":
            self.advance()
            body = self.body()
        self.expect("dot", "'.'")
        rules.append(Rule(len(rules), head, tuple(body)))

    def program(self) -> Program:
        rules: list[Rule] = []
        queries: list[Query] = []
        while self.tok.kind != "eof":
            self.statement(rules, queries)
        return Program(tuple(self.atoms), tuple(rules), queries[-1] if queries else None)


def parse_program(text: str) -> Program:
    """Parse program text into a :class:`Program`.

    Accepts facts ``h.``, rules ``h :- b1, ..., bn.``, constraints
    ``:- b1, ..., bn.`` and query directives ``?- l1, ..., ln.``.
    Raises :class:`ParseError` with a 1-based line and column.
    """
    return _Parser(text).program()


def parse_query(text: str, program: Optional[Program] = None) -> tuple[Query, Program]:
    """Parse ``?- l1, ..., ln.`` or a bare ``l1, ..., ln``.

    Atoms resolve against ``program``; unknown names are interned as ruleless
    atoms, so the (possibly extended) program is returned alongside the query.
    """
    program = program if program is not None else Program()
    p = _Parser(text, list(program.atoms))
    if p.tok.kind == "query":
        p.advance()
    if p.tok.kind == "eof":
        raise ParseError("empty goal list", p.tok.line, p.tok.col)
    goals = p.body()
    if p.tok.kind == "dot":
        p.advance()
    if p.tok.kind != "eof":
        raise ParseError(f"unexpected {p.tok.text!r} after query", p.tok.line, p.tok.col)
    return Query(tuple(goals)), program.with_atoms(p.atoms)


def render_program(program: Program) -> str:
    lines = [program.rule_str(r) for r in program.rules]
    if program.query is not None:
        lines.append(program.query_str(program.query))
    return "\n".join(lines) + ("\n" if lines else "")


def concat_programs(programs: Sequence[Program]) -> Program:
    """Concatenate programs in order, merging atoms by name."""
    atoms: list[str] = []
    index: dict[str, int] = {}
    rules: list[Rule] = []
    query = None
    for prog in programs:
        remap = []
        for name in prog.atoms:
            if name not in index:
                index[name] = len(atoms)
                atoms.append(name)
            remap.append(index[name])
        for r in prog.rules:
            head = None if r.head is None else remap[r.head]
            body = tuple(Literal(remap[l.atom], l.positive) for l in r.body)
            rules.append(Rule(len(rules), head, body))
        if prog.query is not None:
            query = Query(tuple(Literal(remap[l.atom], l.positive) for l in prog.query.goals))
    return Program(tuple(atoms), tuple(rules), query)


def rename_atoms(program: Program, prefix: str) -> Program:
    return Program(tuple(prefix + n for n in program.atoms), program.rules, program.query)


def with_rules(program: Program, extra: Iterable[tuple[Optional[str], Sequence[tuple[str, bool]]]]) -> Program:
    """Append rules given by atom names, interning new names as needed."""
    atoms = list(program.atoms)
    index = {n: i for i, n in enumerate(atoms)}

    def intern(name: str) -> int:
        if name not in index:
            index[name] = len(atoms)
            atoms.append(name)
        return index[name]

    rules = list(program.rules)
    for head, body in extra:
        h = None if head is None else intern(head)
        rules.append(Rule(len(rules), h, tuple(Literal(intern(a), pos) for a, pos in body)))
    return Program(tuple(atoms), tuple(rules), program.query)
