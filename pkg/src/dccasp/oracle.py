"""Brute-force stable model machinery.

Deliberately naive: every candidate subset is checked against the least
model of its reduct. Used as ground truth for the goal-directed solver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .syntax import Program, Rule

DEFAULT_ATOM_LIMIT = 24


class AtomLimitExceeded(ValueError):
    pass


class ClosureViolation(ValueError):
    pass


@dataclass(frozen=True)
class AnswerSet:
    atoms: frozenset[int]
    names: frozenset[str]

    def __str__(self) -> str:
        return "{ " + ", ".join(sorted(self.names)) + " }" if self.names else "{ }"


def gl_reduct(program: Program, x: Iterable[int]) -> Program:
    x = set(x)
    rules = []
    for r in program.rules:
        if any(not l.positive and l.atom in x for l in r.body):
            continue
        body = tuple(l for l in r.body if l.positive)
        rules.append(Rule(len(rules), r.head, body))
    return Program(program.atoms, tuple(rules))


def least_model(program: Program) -> Optional[frozenset[int]]:
    """Least model of a positive program, or None when a constraint fires."""
    model: set[int] = set()
    waiting: dict[int, list[int]] = {}
    missing = []
    todo = []
    for i, r in enumerate(program.rules):
        if any(not l.positive for l in r.body):
            raise ValueError("least_model needs a positive program")
        need = {l.atom for l in r.body}
        missing.append(len(need))
        for a in need:
            waiting.setdefault(a, []).append(i)
        if not need:
            todo.append(i)
    fired = [False] * len(program.rules)
    while todo:
        i = todo.pop()
        if fired[i]:
            continue
        fired[i] = True
        h = program.rules[i].head
        if h is None:
            return None
        if h in model:
            continue
        model.add(h)
        for j in waiting.get(h, ()):
            missing[j] -= 1
            if missing[j] == 0:
                todo.append(j)
    return frozenset(model)


def is_stable(program: Program, x: Iterable[int]) -> bool:
    x = frozenset(x)
    return least_model(gl_reduct(program, x)) == x


def enumerate_answer_sets(program: Program, atom_limit: int = DEFAULT_ATOM_LIMIT) -> list[AnswerSet]:
    """All stable models, ordered by size, then lexicographically by atom id."""
    n = len(program.atoms)
    if n > atom_limit:
        raise AtomLimitExceeded(f"{n} atoms exceeds the enumeration limit of {atom_limit}")
    # only atoms that head some rule can be true
    heads = sorted({r.head for r in program.rules if r.head is not None})
    out = []
    for size in range(len(heads) + 1):
        for combo in itertools.combinations(heads, size):
            if is_stable(program, combo):
                s = frozenset(combo)
                out.append(AnswerSet(s, frozenset(program.atoms[a] for a in s)))
    return out


@dataclass(frozen=True)
class SplitDecomposition:
    u: frozenset[int]
    bottom: Program
    top: Program


def is_splitting_set(program: Program, u: Iterable[int]) -> bool:
    u = set(u)
    return all(r.head is None or r.head not in u or all(l.atom in u for l in r.body) for r in program.rules)


def splitting_closure(program: Program, seed: Iterable[int]) -> frozenset[int]:
    bodies: dict[int, list[int]] = {}
    for r in program.rules:
        if r.head is not None:
            bodies.setdefault(r.head, []).extend(l.atom for l in r.body)
    out = set()
    stack = list(seed)
    while stack:
        a = stack.pop()
        if a not in out:
            out.add(a)
            stack.extend(bodies.get(a, ()))
    return frozenset(out)


def split(program: Program, u: Iterable[int]) -> SplitDecomposition:
    u = frozenset(u)
    if not is_splitting_set(program, u):
        raise ClosureViolation("not a splitting set: some rule with head in U has a body atom outside U")
    bottom, top = [], []
    for r in program.rules:
        if r.head is not None:
            in_bottom = r.head in u
        else:
            in_bottom = all(l.atom in u for l in r.body)
        (bottom if in_bottom else top).append(r)
    renum = lambda rs: tuple(Rule(i, r.head, r.body) for i, r in enumerate(rs))
    return SplitDecomposition(u, Program(program.atoms, renum(bottom)), Program(program.atoms, renum(top)))


def partial_eval_top(top: Program, u: Iterable[int], x: Iterable[int]) -> Program:
    """Evaluate the literals over ``u`` in ``top`` against ``x`` (true atoms of u)."""
    u, x = frozenset(u), frozenset(x)
    if not x <= u:
        raise ValueError("x must be a subset of u")
    rules = []
    for r in top.rules:
        if r.head is not None and r.head in u:
            raise ClosureViolation("top rule has its head in the splitting set")
        body = []
        dropped = False
        for l in r.body:
            if l.atom in u:
                if (l.atom in x) != l.positive:
                    dropped = True
                    break
            else:
                body.append(l)
        if not dropped:
            rules.append(Rule(len(rules), r.head, tuple(body)))
    return Program(top.atoms, tuple(rules))
